#include "pmroot/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "pmroot/pm_function.hpp"

namespace pmroot {

namespace {

MonotonePL reflect_polyline(const MonotonePL& phi, double p, double q) {
    const double s = p + q;
    const auto& xs = phi.xs();
    const auto& ys = phi.ys();
    const std::size_t n = xs.size();
    std::vector<double> rx(n), ry(n);
    for (std::size_t i = 0; i < n; ++i) {
        rx[i] = s - xs[n - 1 - i];
        ry[i] = s - ys[n - 1 - i];
    }
    return MonotonePL(std::move(rx), std::move(ry));
}

} // namespace

SegmentRoot::SegmentRoot(MonotonePL phi_canon, double p, double q, double z, double w,
                         bool reflected, bool two_sided, const KernelOptions& opt)
    : phi_(std::move(phi_canon)),
      p_(p),
      q_(q),
      z_(z),
      w_(w),
      reflected_(reflected),
      two_sided_(two_sided),
      seed_({z, w}, {w, phi_.eval(z)}, opt.seed.bend),
      opt_(opt) {}

SegmentRoot SegmentRoot::make(const MonotonePL& phi, double p, double q,
                              std::optional<double> left_anchor,
                              std::optional<double> right_anchor, const KernelOptions& opt) {
    if (!(p < q)) fail(ErrorCode::AnchorOutOfRange, "segment needs p < q");
    MonotonePL local = phi.restrict(p, q);
    if (left_anchor && right_anchor)
        fail(ErrorCode::AnchorOutOfRange, "a segment admits at most one anchored endpoint");

    if (right_anchor) {
        // phi below the diagonal; work on reflected coordinates.
        const double fq = local.eval(q);
        if (!(fq < q)) fail(ErrorCode::AnchorOutOfRange, "right anchor given but endpoint is fixed");
        if (!(*right_anchor > fq && *right_anchor < q))
            fail(ErrorCode::AnchorOutOfRange, "right anchor outside (phi(q), q)");
        MonotonePL canon = reflect_polyline(local, p, q);
        const double z = p, w = p + q - *right_anchor;
        return SegmentRoot(std::move(canon), p, q, z, w, true, false, opt);
    }
    if (left_anchor) {
        const double fp = local.eval(p);
        if (!(fp > p)) fail(ErrorCode::AnchorOutOfRange, "left anchor given but endpoint is fixed");
        if (!(*left_anchor > p && *left_anchor < fp))
            fail(ErrorCode::AnchorOutOfRange, "left anchor outside (p, phi(p))");
        return SegmentRoot(std::move(local), p, q, p, *left_anchor, false, false, opt);
    }
    // Interior segment: both endpoints fixed; orientation from the midpoint.
    const double mid = 0.5 * (p + q);
    const bool above = local.eval(mid) > mid;
    MonotonePL canon = above ? std::move(local) : reflect_polyline(local, p, q);
    const double z = mid;
    const double w = 0.5 * (z + canon.eval(z));
    if (!(w > z)) fail(ErrorCode::NonIsolatedFixedPoints, "segment map is numerically the identity");
    return SegmentRoot(std::move(canon), p, q, z, w, !above, true, opt);
}

SegmentRoot SegmentRoot::restore(const MonotonePL& phi, double p, double q, bool reflected,
                                 double z, double w, const KernelOptions& opt) {
    MonotonePL local = phi.restrict(p, q);
    MonotonePL canon = reflected ? reflect_polyline(local, p, q) : std::move(local);
    const bool two_sided = z > p;
    return SegmentRoot(std::move(canon), p, q, z, w, reflected, two_sided, opt);
}

double SegmentRoot::image_lo() const { return eval(p_); }
double SegmentRoot::image_hi() const { return eval(q_); }

double SegmentRoot::eval(double x) const {
    constexpr double slack = 1e-12;
    if (x < p_ - slack || x > q_ + slack) fail(ErrorCode::OutOfDomain, "segment root eval");
    x = std::clamp(x, p_, q_);
    if (reflected_) return reflect(eval_canon(reflect(x)));
    return eval_canon(x);
}

double SegmentRoot::eval_inverse(double y) const {
    if (reflected_) return reflect(eval_inverse_canon(reflect(y)));
    return eval_inverse_canon(y);
}

double SegmentRoot::eval_canon(double x) const {
    if (x >= q_ || q_ - x <= opt_.snap_tol) return q_;
    if (two_sided_ && x - p_ <= opt_.snap_tol) return p_;

    long m = 0;
    if (x >= z_) {
        // Locate the pocket [t_i, t_{i+1}) with t_0=z, t_1=w, t_{i+2}=phi(t_i).
        double prev = z_, cur = w_;
        long i = 0;
        while (x >= cur) {
            const double next = phi_.eval(prev);
            if (!(next > cur)) {
                // orbit stalled at the attracting end
                return q_;
            }
            prev = cur;
            cur = next;
            if (++i > opt_.orbit_cap)
                fail(ErrorCode::OrbitCapExceeded, "pocket location exceeded orbit cap");
        }
        m = i / 2;
        double u = x;
        for (long s = 0; s < m; ++s) u = phi_.eval_inverse(u);
        if (i % 2 == 0) {
            u = std::clamp(u, z_, w_);
            double v = seed_.eval(u);
            for (long s = 0; s < m; ++s) v = phi_.eval(v);
            return std::min(v, q_);
        }
        u = std::clamp(u, w_, phi_.eval(z_));
        double v = seed_.eval_inverse(u);
        for (long s = 0; s < m + 1; ++s) v = phi_.eval(v);
        return std::min(v, q_);
    }
    // x < z: only reachable for two-sided segments; commute with phi.
    double u = x;
    long k = 0;
    while (u < z_) {
        const double next = phi_.eval(u);
        if (!(next > u)) return p_;
        u = next;
        if (++k > opt_.orbit_cap)
            fail(ErrorCode::OrbitCapExceeded, "backward pocket location exceeded orbit cap");
    }
    double v = (u < w_) ? seed_.eval(std::clamp(u, z_, w_))
                        : phi_.eval(seed_.eval_inverse(std::clamp(u, w_, phi_.eval(z_))));
    for (long s = 0; s < k; ++s) v = phi_.eval_inverse(v);
    return std::max(v, p_);
}

double SegmentRoot::eval_inverse_canon(double y) const {
    const double ylo = two_sided_ ? p_ : w_;
    constexpr double slack = 1e-12;
    if (y < ylo - slack || y > q_ + slack)
        fail(ErrorCode::OutOfDomain, "segment root inverse outside image");
    y = std::clamp(y, ylo, q_);
    if (y >= q_ || q_ - y <= opt_.snap_tol) return q_;
    if (two_sided_ && y - p_ <= opt_.snap_tol) return p_;

    if (y >= w_) {
        // y in pocket j >= 1; the preimage lives in pocket j-1.
        double prev = w_, cur = phi_.eval(z_);
        long j = 1;
        while (y >= cur) {
            const double next = phi_.eval(prev);
            if (!(next > cur)) return q_;
            prev = cur;
            cur = next;
            if (++j > opt_.orbit_cap)
                fail(ErrorCode::OrbitCapExceeded, "inverse pocket location exceeded orbit cap");
        }
        if ((j - 1) % 2 == 0) {
            const long m = (j - 1) / 2;
            double u = y;
            for (long s = 0; s < m; ++s) u = phi_.eval_inverse(u);
            u = std::clamp(u, w_, phi_.eval(z_));
            double v = seed_.eval_inverse(u);
            for (long s = 0; s < m; ++s) v = phi_.eval(v);
            return std::min(v, q_);
        }
        const long m = (j - 2) / 2;
        double u = y;
        for (long s = 0; s < m + 1; ++s) u = phi_.eval_inverse(u);
        u = std::clamp(u, z_, w_);
        double v = seed_.eval(u);
        for (long s = 0; s < m; ++s) v = phi_.eval(v);
        return std::min(v, q_);
    }
    // y < w: two-sided; push forward into the invertible zone and pull back.
    double u = y;
    long k = 0;
    while (u < w_) {
        const double next = phi_.eval(u);
        if (!(next > u)) return p_;
        u = next;
        if (++k > opt_.orbit_cap)
            fail(ErrorCode::OrbitCapExceeded, "inverse backward location exceeded orbit cap");
    }
    double v = eval_inverse_canon(u);
    for (long s = 0; s < k; ++s) v = phi_.eval_inverse(v);
    return std::max(v, p_);
}

double IncreasingKernel::eval(double x) const {
    constexpr double slack = 1e-12;
    if (x < lo() - slack || x > hi() + slack) fail(ErrorCode::OutOfDomain, "kernel eval");
    x = std::clamp(x, lo(), hi());
    for (double fp : fixed_)
        if (x == fp) return x;
    for (const auto& seg : segments_)
        if (x <= seg.q()) return seg.eval(x);
    return segments_.back().eval(x);
}

double IncreasingKernel::image_lo() const { return segments_.front().image_lo(); }
double IncreasingKernel::image_hi() const { return segments_.back().image_hi(); }

double IncreasingKernel::eval_inverse(double y) const {
    constexpr double slack = 1e-12;
    if (y < image_lo() - slack || y > image_hi() + slack)
        fail(ErrorCode::OutOfDomain, "kernel inverse outside image");
    y = std::clamp(y, image_lo(), image_hi());
    for (double fp : fixed_)
        if (y == fp) return y;
    for (const auto& seg : segments_)
        if (y <= seg.image_hi()) return seg.eval_inverse(y);
    return segments_.back().eval_inverse(y);
}

IncreasingKernel inc_root_general(const MonotonePL& phi, std::optional<double> left_anchor,
                                  std::optional<double> right_anchor, const KernelOptions& opt) {
    const double a = phi.lo(), b = phi.hi();
    const double fa = phi.eval(a), fb = phi.eval(b);
    if (fa < a || fb > b)
        fail(ErrorCode::PreconditionFailed, "map is not a self-map of its interval");
    const bool left_fixed = (fa == a), right_fixed = (fb == b);
    if (!left_fixed && !left_anchor)
        fail(ErrorCode::AnchorOutOfRange, "left endpoint moves; a left anchor is required");
    if (!right_fixed && !right_anchor)
        fail(ErrorCode::AnchorOutOfRange, "right endpoint moves; a right anchor is required");
    if (left_fixed && left_anchor && *left_anchor != a)
        fail(ErrorCode::AnchorOutOfRange, "left endpoint is fixed; anchor must equal it");
    if (right_fixed && right_anchor && *right_anchor != b)
        fail(ErrorCode::AnchorOutOfRange, "right endpoint is fixed; anchor must equal it");

    std::vector<double> pts = phi.fixed_points();
    if (pts.empty() || pts.front() != a) pts.insert(pts.begin(), a);
    if (pts.back() != b) pts.push_back(b);

    IncreasingKernel k(phi, opt);
    k.fixed_ = phi.fixed_points();
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const bool first = (i == 0), last = (i + 2 == pts.size());
        std::optional<double> la = (first && !left_fixed) ? left_anchor : std::nullopt;
        std::optional<double> ra = (last && !right_fixed) ? right_anchor : std::nullopt;
        k.segments_.push_back(SegmentRoot::make(phi, pts[i], pts[i + 1], la, ra, opt));
    }
    return k;
}

IncreasingKernel inc_root_segment(const MonotonePL& phi, double anchor,
                                  const KernelOptions& opt) {
    const double a = phi.lo(), b = phi.hi();
    const bool above = phi.eval(a) > a;
    if (above) return inc_root_general(phi, anchor, std::nullopt, opt);
    (void)b;
    return inc_root_general(phi, std::nullopt, anchor, opt);
}

IncreasingKernel restore_increasing_kernel(const MonotonePL& phi,
                                           const std::vector<double>& fixed_points,
                                           const std::vector<std::array<double, 5>>& segments,
                                           const KernelOptions& opt) {
    IncreasingKernel k(phi, opt);
    k.fixed_ = fixed_points;
    for (const auto& s : segments)
        k.segments_.push_back(SegmentRoot::restore(phi, s[0], s[1], s[2] != 0.0, s[3], s[4], opt));
    return k;
}

DecreasingKernel dec_root_paired(const MonotonePL& left_half, const MonotonePL& right_half,
                                 double xstar, double ystar, const KernelOptions& opt) {
    DecreasingKernel k(left_half, right_half, opt);
    k.alpha_ = left_half.lo();
    k.beta_ = left_half.hi();
    k.eta_ = right_half.lo();
    k.xi_ = right_half.hi();
    if (k.beta_ > k.eta_) fail(ErrorCode::PreconditionFailed, "halves must not overlap");
    const double fa = left_half.eval(k.alpha_);
    const double fxi = right_half.eval(k.xi_);
    if (!(fa > k.alpha_)) fail(ErrorCode::PreconditionFailed, "alpha must move right under phi");
    if (!(fxi < k.xi_)) fail(ErrorCode::PreconditionFailed, "xi must move left under phi");
    if (std::abs(left_half.eval(k.beta_) - k.beta_) > 1e-9 ||
        std::abs(right_half.eval(k.eta_) - k.eta_) > 1e-9)
        fail(ErrorCode::PreconditionFailed, "beta and eta must be fixed points");

    constexpr double tol = 1e-12;
    const bool corner_hi = std::abs(xstar - fa) <= tol && std::abs(ystar - k.xi_) <= tol;
    const bool corner_lo = std::abs(xstar - k.alpha_) <= tol && std::abs(ystar - fxi) <= tol;
    const bool interior =
        xstar > k.alpha_ && xstar < fa && ystar > fxi && ystar < k.xi_;
    if (!corner_hi && !corner_lo && !interior)
        fail(ErrorCode::AnchorOutOfRange,
             "anchor pair must lie in (alpha, phi(alpha)) x (phi(xi), xi) or at a corner");
    k.corner_ = corner_hi || corner_lo;
    if (corner_hi) {
        xstar = fa;
        ystar = k.xi_;
    }
    if (corner_lo) {
        xstar = k.alpha_;
        ystar = fxi;
    }
    k.xstar_ = xstar;
    k.ystar_ = ystar;

    // Decreasing seed on [alpha, phi(alpha)] pinned at three points.
    std::vector<double> us{k.alpha_}, vs{ystar};
    if (xstar > k.alpha_ && xstar < fa) {
        us.push_back(xstar);
        vs.push_back(fxi);
    }
    us.push_back(fa);
    vs.push_back(right_half.eval(ystar));
    k.seed_ = Seed(std::move(us), std::move(vs), opt.seed.bend);
    return k;
}

double DecreasingKernel::eval_hat(double x) const {
    constexpr double slack = 1e-12;
    if (x < alpha_ - slack || x > beta_ + slack)
        fail(ErrorCode::OutOfDomain, "hat eval outside [alpha,beta]");
    x = std::clamp(x, alpha_, beta_);
    if (x >= beta_ || beta_ - x <= opt_.snap_tol) return eta_;
    // Locate x in [phi^i(alpha), phi^{i+1}(alpha)).
    double cur = left_.eval(alpha_);
    long i = 0;
    while (x >= cur) {
        const double next = left_.eval(cur);
        if (!(next > cur)) return eta_;
        cur = next;
        if (++i > opt_.orbit_cap)
            fail(ErrorCode::OrbitCapExceeded, "hat pocket location exceeded orbit cap");
    }
    double u = x;
    for (long s = 0; s < i; ++s) u = left_.eval_inverse(u);
    u = std::clamp(u, alpha_, left_.eval(alpha_));
    double v = seed_.eval(u);
    for (long s = 0; s < i; ++s) v = right_.eval(v);
    return std::max(v, eta_);
}

double DecreasingKernel::eval_hat_inverse(double v) const {
    constexpr double slack = 1e-12;
    if (v < eta_ - slack || v > ystar_ + slack)
        fail(ErrorCode::OutOfDomain, "hat inverse outside [eta, ystar]");
    v = std::clamp(v, eta_, ystar_);
    if (v <= eta_ || v - eta_ <= opt_.snap_tol) return beta_;
    // Locate v in (phi^{i+1}(ystar), phi^i(ystar)].
    double cur = right_.eval(ystar_);
    long i = 0;
    while (v <= cur) {
        const double next = right_.eval(cur);
        if (!(next < cur)) return beta_;
        cur = next;
        if (++i > opt_.orbit_cap)
            fail(ErrorCode::OrbitCapExceeded, "hat inverse pocket location exceeded orbit cap");
    }
    double u = v;
    for (long s = 0; s < i; ++s) u = right_.eval_inverse(u);
    u = std::clamp(u, right_.eval(ystar_), ystar_);
    double x = seed_.eval_inverse(u);
    for (long s = 0; s < i; ++s) x = left_.eval(x);
    return std::min(x, beta_);
}

double DecreasingKernel::eval(double x) const {
    constexpr double slack = 1e-12;
    if (x >= alpha_ - slack && x <= beta_ + slack) return eval_hat(x);
    if (x >= eta_ - slack && x <= xi_ + slack)
        return eval_hat_inverse(right_.eval(std::clamp(x, eta_, xi_)));
    fail(ErrorCode::OutOfDomain, "decreasing root eval outside its two intervals");
}

double DecreasingKernel::eval_inverse(double y) const {
    constexpr double slack = 1e-12;
    if (y >= eta_ - slack && y <= ystar_ + slack) return eval_hat_inverse(std::clamp(y, eta_, ystar_));
    if (y >= xstar_ - slack && y <= beta_ + slack)
        return right_.eval_inverse(eval_hat(std::clamp(y, xstar_, beta_)));
    fail(ErrorCode::OutOfDomain, "decreasing root inverse outside image");
}

DecreasingKernel dec_root_on_K(const PMFunction& F, const CharInterval& K, double y_left,
                               double x_right, const KernelOptions& opt) {
    MonotonePL phi = restrict_to_lap(F, K.lap_index);
    const double a = phi.lo(), b = phi.hi();
    if (!(phi.eval(a) > a) || !(phi.eval(b) < b))
        fail(ErrorCode::NotReversing,
             "endpoints of the characteristic interval must move inward");
    std::vector<double> fixed = phi.fixed_points();
    std::vector<double> interior;
    for (double p : fixed)
        if (p > a && p < b) interior.push_back(p);
    if (interior.size() != 1)
        fail(ErrorCode::MultipleInteriorFixedPoints,
             std::to_string(interior.size()) + " interior fixed points; need exactly one");
    const double center = interior.front();
    return dec_root_paired(phi.restrict(a, center), phi.restrict(center, b), x_right, y_left, opt);
}

} // namespace pmroot
