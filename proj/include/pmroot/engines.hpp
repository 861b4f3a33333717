#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "pmroot/conditions.hpp"
#include "pmroot/kernel.hpp"
#include "pmroot/pm_function.hpp"

namespace pmroot {

enum class Theorem { T21, T22, T23, T24 };

const char* to_string(Theorem t);

enum class PieceKind {
    Kernel,    // the square root on K itself
    KernelInv, // x -> kernel^{-1}(F(x))
    LapInv,    // x -> lap_inverse(F, via_lap, kernel(F(x)))
};

struct LapPiece {
    PieceKind kind = PieceKind::Kernel;
    int via_lap = -1; // for LapInv
};

using KernelVariant = std::variant<IncreasingKernel, DecreasingKernel>;

/// Piecewise assembly of a square root of F: the kernel on the characteristic
/// interval and inverse-composition pieces on every other lap. Evaluable on
/// the whole domain; immutable.
class RootFunction {
public:
    double eval(double x) const;
    double operator()(double x) const { return eval(x); }

    /// Closed-interval evaluation of the piece that owns lap `lap_index`
    /// (outer coordinates); used for junction-gap measurements.
    double eval_piece(int lap_index, double x) const;

    /// Interior piece boundaries (the forts of F), outer coordinates.
    std::vector<double> piece_boundaries() const;

    std::array<double, 2> domain() const;
    std::array<double, 2> K_bounds() const; // outer coordinates
    int lap_count() const { return inner_.lap_count(); }

    Theorem source() const { return source_; }
    bool mirrored() const { return mirrored_; }
    bool increasing_on_K() const {
        return std::holds_alternative<IncreasingKernel>(kernel_);
    }

    const PMFunction& inner_map() const { return inner_; }
    const KernelVariant& kernel() const { return kernel_; }
    const std::vector<LapPiece>& pieces() const { return pieces_; }
    const std::optional<FortPattern>& pattern() const { return pattern_; }
    const KernelOptions& options() const { return opts_; }
    int k_lap() const { return k_lap_; }

    /// Assemble from parts (used by construction and recipe rebuild).
    /// With `validate` set, verifies per-lap range admissibility and junction
    /// continuity; recipe rebuilds skip this so a tampered recipe still
    /// evaluates and fails verification instead of refusing to load.
    static RootFunction assemble(PMFunction inner, int k_lap, KernelVariant kernel,
                                 std::vector<LapPiece> pieces, Theorem source, bool mirrored,
                                 std::optional<FortPattern> pattern, KernelOptions opts,
                                 bool validate = true);

private:
    RootFunction(PMFunction inner, KernelVariant kernel)
        : inner_(std::move(inner)), kernel_(std::move(kernel)) {}

    double eval_inner(double x) const;
    double eval_piece_inner(int lap_index, double x) const;

    PMFunction inner_; // the map the construction ran on (post-mirror)
    KernelVariant kernel_;
    std::vector<LapPiece> pieces_;
    int k_lap_ = 0;
    Theorem source_ = Theorem::T21;
    bool mirrored_ = false;
    double reflect_sum_ = 0.0;
    std::optional<FortPattern> pattern_;
    KernelOptions opts_;
};

RootFunction construct_t21(const PMFunction& F, const KernelOptions& opts = {});
RootFunction construct_t22(const PMFunction& F, const KernelOptions& opts = {},
                           PatternMode mode = PatternMode::Strict);
RootFunction construct_t23(const PMFunction& F, const KernelOptions& opts = {});
RootFunction construct_t24(const PMFunction& F, const KernelOptions& opts = {},
                           PatternMode mode = PatternMode::Strict);

enum class RootPreference { Increasing, Decreasing, Any };

/// Dispatch: analyze the map, mirror when the characteristic interval is the
/// last lap, and try the matching constructions in preference order.
/// Throws NoApplicableTheorem with collected diagnostics when nothing fits.
RootFunction construct_auto(const PMFunction& F, RootPreference preferred = RootPreference::Any,
                            const KernelOptions& opts = {},
                            PatternMode mode = PatternMode::Strict);

} // namespace pmroot
