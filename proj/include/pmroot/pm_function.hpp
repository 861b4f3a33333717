#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pmroot/errors.hpp"

namespace pmroot {

/// Interior breakpoints where the slope changes sign, in increasing order.
struct FortList {
    std::vector<double> positions;
    int count() const { return static_cast<int>(positions.size()); }
};

/// Continuous piecewise-linear self-map of a compact interval [a,b] with
/// strictly monotone pieces. Breakpoints need not all be forts: consecutive
/// pieces may share a slope sign. Immutable after construction.
class PMFunction {
public:
    /// Checks all representation invariants and derives the fort list.
    /// Throws UnsortedAbscissae, FlatSegment or NonSelfMap.
    static PMFunction validate(std::array<double, 2> domain, std::vector<double> xs,
                               std::vector<double> ys);

    double a() const { return domain_[0]; }
    double b() const { return domain_[1]; }
    double width() const { return domain_[1] - domain_[0]; }
    const std::vector<double>& xs() const { return xs_; }
    const std::vector<double>& ys() const { return ys_; }
    const FortList& forts() const { return forts_; }
    int fort_count() const { return forts_.count(); }

    /// c_i labelling: c_0 = a, c_1..c_v the forts, c_{v+1} = b.
    double c(int i) const;
    /// Number of laps, v + 1.
    int lap_count() const { return forts_.count() + 1; }
    /// Lap i = [c_i, c_{i+1}] (may span several linear pieces).
    std::array<double, 2> lap(int i) const { return {c(i), c(i + 1)}; }
    /// Index of the lap containing x (ties at interior forts go left).
    int lap_containing(double x) const;
    /// +1 if F is increasing on lap i, -1 if decreasing.
    int lap_direction(int i) const;

    /// Linear interpolation; exact at breakpoints. Throws OutOfDomain.
    double eval(double x) const;
    double operator()(double x) const { return eval(x); }

    /// Exact range [min ys, max ys].
    std::array<double, 2> range() const;

    /// Unique x in lap i with F(x) = y. Throws OutOfLapRange.
    double lap_inverse(int lap_index, double y) const;

    /// All x in [a,b] with F(x) = y, ascending, deduplicated.
    std::vector<double> preimages(double y) const;

    bool operator==(const PMFunction& o) const {
        return domain_ == o.domain_ && xs_ == o.xs_ && ys_ == o.ys_;
    }

private:
    PMFunction() = default;
    std::array<double, 2> domain_{};
    std::vector<double> xs_;
    std::vector<double> ys_;
    FortList forts_;
    std::vector<int> fort_breakpoint_idx_; // index into xs_ per fort
};

/// Identity map on [a,b].
PMFunction identity_map(double a, double b);

/// Exact piecewise-linear composite F∘G. Breakpoints are G's breakpoints plus
/// all preimages under G of F's breakpoints. Throws RangeMismatch when
/// range(G) is not contained in domain(F); BudgetExceeded when the composite
/// would exceed `breakpoint_budget` breakpoints.
///
/// When breakpoints fall within machine resolution of each other they are
/// merged and `*lossy` (if given) is set: the composite is then a collapsed
/// approximation and derived fort counts are no longer exact.
PMFunction compose(const PMFunction& F, const PMFunction& G,
                   std::size_t breakpoint_budget = 1000000, bool* lossy = nullptr);

/// F^n by repeated composition, n >= 1.
PMFunction iterate(const PMFunction& F, int n, std::size_t breakpoint_budget = 1000000);

struct HeightReport {
    /// Defined when the fort counts stabilize within the cap.
    std::optional<int> value;
    /// N(F^0), N(F^1), ... as far as computed.
    std::vector<int> fort_counts;
    int cap = 32;
    /// True when iteration stopped early because composition exceeded the
    /// breakpoint budget; counts computed so far were strictly increasing.
    bool budget_exhausted = false;
    /// True when composition collapsed sub-resolution breakpoints and the
    /// apparent stabilization failed the range-inclusion cross-check: the
    /// counts are numerical artifacts and no finite height is certified.
    bool saturated = false;

    bool is_finite() const { return value.has_value(); }
    std::string to_string() const;
};

/// Nonmonotonicity height: smallest i0 with N(F^{i0}) = N(F^{i0+1}).
/// Unstabilized within `cap` iterations (or within the composition budget)
/// reports an infinite height together with the counts seen.
HeightReport height(const PMFunction& F, int cap = 32,
                    std::size_t breakpoint_budget = 1000000);

struct CharInterval {
    int lap_index = 0;
    std::array<double, 2> bounds{};
};

/// The lap covering the range of F; exists iff height <= 1. A monotone map
/// (height 0) yields the whole domain as the single lap.
/// Throws NoCharacteristicInterval.
CharInterval characteristic_interval(const PMFunction& F, int height_cap = 32);

/// Lap containing range(F), if any; independent of the height computation.
std::optional<CharInterval> find_covering_lap(const PMFunction& F);

/// Conjugation by the reflection phi(x) = -x + a + b. An involution that
/// preserves fort count and height and swaps first and last laps.
PMFunction mirror_conjugate(const PMFunction& F);

/// 64-bit FNV-1a over the canonical bit representation of domain/xs/ys.
std::uint64_t content_hash(const PMFunction& F);

} // namespace pmroot
