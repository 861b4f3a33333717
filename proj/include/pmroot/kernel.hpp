#pragma once

#include <optional>
#include <vector>

#include "pmroot/monotone_pl.hpp"

namespace pmroot {

struct KernelOptions {
    SeedSpec seed{};
    long orbit_cap = 100000;
    double snap_tol = 1e-13;
};

/// Square root of an increasing map on one interval [p,q] between consecutive
/// fixed points. The root is pinned on a fundamental domain [z,w] by a seed
/// bijection and extended along forward/backward orbits; evaluation locates
/// the pocket containing the query point lazily. When the map sits below the
/// diagonal the segment works on the reflected coordinates internally.
class SegmentRoot {
public:
    static SegmentRoot make(const MonotonePL& phi, double p, double q,
                            std::optional<double> left_anchor,
                            std::optional<double> right_anchor, const KernelOptions& opt);

    /// Rebuild from serialized internals (canonical z, w).
    static SegmentRoot restore(const MonotonePL& phi, double p, double q, bool reflected,
                               double z, double w, const KernelOptions& opt);

    double eval(double x) const;
    double eval_inverse(double y) const;

    double p() const { return p_; }
    double q() const { return q_; }
    /// Image endpoints of the segment root: [value at p, value at q].
    double image_lo() const;
    double image_hi() const;

    bool reflected() const { return reflected_; }
    double z() const { return z_; }
    double w() const { return w_; }

private:
    SegmentRoot(MonotonePL phi_canon, double p, double q, double z, double w, bool reflected,
                bool two_sided, const KernelOptions& opt);

    double eval_canon(double x) const;
    double eval_inverse_canon(double y) const;
    double reflect(double x) const { return p_ + q_ - x; }

    MonotonePL phi_;  // canonical orientation: phi(x) > x strictly inside (p,q)
    double p_, q_;
    double z_, w_; // canonical fundamental domain and its image start
    bool reflected_ = false;
    bool two_sided_ = false;
    Seed seed_;
    KernelOptions opt_;
};

/// Strictly increasing square root of an increasing map, assembled from
/// segment roots over the fixed-point decomposition.
class IncreasingKernel {
public:
    double eval(double x) const;
    double eval_inverse(double y) const;

    double lo() const { return phi_.lo(); }
    double hi() const { return phi_.hi(); }
    /// Image of the root: [eval(lo), eval(hi)].
    double image_lo() const;
    double image_hi() const;

    const std::vector<double>& fixed_points() const { return fixed_; }
    const std::vector<SegmentRoot>& segments() const { return segments_; }
    const MonotonePL& phi() const { return phi_; }
    const KernelOptions& options() const { return opt_; }

    friend IncreasingKernel inc_root_general(const MonotonePL&, std::optional<double>,
                                             std::optional<double>, const KernelOptions&);
    friend IncreasingKernel restore_increasing_kernel(const MonotonePL&,
                                                      const std::vector<double>&,
                                                      const std::vector<std::array<double, 5>>&,
                                                      const KernelOptions&);

private:
    IncreasingKernel(MonotonePL phi, KernelOptions opt) : phi_(std::move(phi)), opt_(opt) {}
    MonotonePL phi_;
    std::vector<double> fixed_;
    std::vector<SegmentRoot> segments_;
    KernelOptions opt_;
};

/// Lemma-style single segment case: phi strictly above (or strictly below)
/// the diagonal on the whole interval, one prescribed endpoint value.
IncreasingKernel inc_root_segment(const MonotonePL& phi, double anchor,
                                  const KernelOptions& opt = {});

/// General case: decompose at the fixed points of phi. Anchors prescribe the
/// root's value at a non-fixed endpoint and are required exactly there;
/// interior segments take a deterministic midpoint seed.
IncreasingKernel inc_root_general(const MonotonePL& phi, std::optional<double> left_anchor,
                                  std::optional<double> right_anchor,
                                  const KernelOptions& opt = {});

/// Rebuild from serialized segment internals [p, q, reflected, z, w].
IncreasingKernel restore_increasing_kernel(const MonotonePL& phi,
                                           const std::vector<double>& fixed_points,
                                           const std::vector<std::array<double, 5>>& segments,
                                           const KernelOptions& opt);

/// Strictly decreasing square root of an increasing map on [alpha,beta] u
/// [eta,xi] with alpha, xi moving inward and beta, eta fixed. Built from a
/// decreasing seed on [alpha, phi(alpha)], extended to a conjugating half map
/// phi_hat on [alpha,beta] (phi_hat . phi = phi . phi_hat), and completed by
/// phi_hat^{-1} . phi on [eta,xi].
class DecreasingKernel {
public:
    double eval(double x) const;
    double eval_inverse(double y) const;

    /// The conjugating half map phi_hat: [alpha,beta] -> [eta, ystar].
    double eval_hat(double x) const;
    double eval_hat_inverse(double v) const;

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double eta() const { return eta_; }
    double xi() const { return xi_; }
    double xstar() const { return xstar_; }
    double ystar() const { return ystar_; }
    /// Image of the root: [xstar, ystar].
    double image_lo() const { return xstar_; }
    double image_hi() const { return ystar_; }
    bool corner_case() const { return corner_; }
    const MonotonePL& left_half() const { return left_; }
    const MonotonePL& right_half() const { return right_; }
    const KernelOptions& options() const { return opt_; }

    friend DecreasingKernel dec_root_paired(const MonotonePL&, const MonotonePL&, double, double,
                                            const KernelOptions&);

private:
    DecreasingKernel(MonotonePL left, MonotonePL right, KernelOptions opt)
        : left_(std::move(left)), right_(std::move(right)), seed_({0, 1}, {0, 1}), opt_(opt) {}

    MonotonePL left_;  // phi on [alpha, beta]
    MonotonePL right_; // phi on [eta, xi]
    double alpha_ = 0, beta_ = 0, eta_ = 0, xi_ = 0;
    double xstar_ = 0, ystar_ = 0;
    bool corner_ = false;
    Seed seed_;
    KernelOptions opt_;
};

/// Anchors (xstar, ystar) admissible per the pairing: the open rectangle
/// (alpha, phi(alpha)) x (phi(xi), xi) or one of the two corner points
/// (phi(alpha), xi) and (alpha, phi(xi)).
DecreasingKernel dec_root_paired(const MonotonePL& left_half, const MonotonePL& right_half,
                                 double xstar, double ystar, const KernelOptions& opt = {});

class PMFunction;
struct CharInterval;

/// Decreasing root of F restricted to its characteristic interval K, with
/// prescribed values y_left = root(left end) and x_right = root(right end).
/// Requires exactly one interior fixed point of F|K (the split point).
DecreasingKernel dec_root_on_K(const PMFunction& F, const CharInterval& K, double y_left,
                               double x_right, const KernelOptions& opt = {});

} // namespace pmroot
