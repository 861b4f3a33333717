#include "pmroot/monotone_pl.hpp"

#include <algorithm>
#include <cmath>

#include "pmroot/pm_function.hpp"

namespace pmroot {

MonotonePL::MonotonePL(std::vector<double> xs, std::vector<double> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() < 2 || xs_.size() != ys_.size())
        fail(ErrorCode::UnsortedAbscissae, "monotone segment needs two matched lists");
    for (std::size_t i = 0; i + 1 < xs_.size(); ++i) {
        if (!(xs_[i] < xs_[i + 1]))
            fail(ErrorCode::UnsortedAbscissae, "segment abscissae not increasing");
        if (!(ys_[i] < ys_[i + 1]))
            fail(ErrorCode::FlatSegment, "segment ordinates not strictly increasing");
    }
}

double MonotonePL::eval(double x) const {
    constexpr double slack = 1e-12;
    if (x < lo() - slack || x > hi() + slack)
        fail(ErrorCode::OutOfDomain, "segment eval outside interval");
    x = std::clamp(x, lo(), hi());
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t j = (it == xs_.begin()) ? 0 : static_cast<std::size_t>(it - xs_.begin()) - 1;
    if (j + 1 >= xs_.size()) j = xs_.size() - 2;
    if (x == xs_[j]) return ys_[j];
    if (x == xs_[j + 1]) return ys_[j + 1];
    const double t = (x - xs_[j]) / (xs_[j + 1] - xs_[j]);
    return std::clamp(ys_[j] * (1.0 - t) + ys_[j + 1] * t, ys_[j], ys_[j + 1]);
}

double MonotonePL::eval_inverse(double y) const {
    constexpr double slack = 1e-12;
    if (y < value_lo() - slack || y > value_hi() + slack)
        fail(ErrorCode::OutOfDomain, "segment inverse outside value range");
    y = std::clamp(y, value_lo(), value_hi());
    auto it = std::upper_bound(ys_.begin(), ys_.end(), y);
    std::size_t j = (it == ys_.begin()) ? 0 : static_cast<std::size_t>(it - ys_.begin()) - 1;
    if (j + 1 >= ys_.size()) j = ys_.size() - 2;
    if (y == ys_[j]) return xs_[j];
    if (y == ys_[j + 1]) return xs_[j + 1];
    const double t = (y - ys_[j]) / (ys_[j + 1] - ys_[j]);
    return std::clamp(xs_[j] * (1.0 - t) + xs_[j + 1] * t, xs_[j], xs_[j + 1]);
}

std::vector<double> MonotonePL::fixed_points() const {
    std::vector<double> out;
    for (std::size_t j = 0; j + 1 < xs_.size(); ++j) {
        const double slope = (ys_[j + 1] - ys_[j]) / (xs_[j + 1] - xs_[j]);
        const double gap0 = ys_[j] - xs_[j];
        const double gap1 = ys_[j + 1] - xs_[j + 1];
        if (gap0 == 0.0 && gap1 == 0.0)
            fail(ErrorCode::NonIsolatedFixedPoints, "a whole piece coincides with the identity");
        if (gap0 == 0.0) {
            out.push_back(xs_[j]);
        } else if (gap0 * gap1 < 0.0) {
            // phi(x) - x is linear on the piece and changes sign inside it.
            const double r = xs_[j] + gap0 / (1.0 - slope);
            out.push_back(std::clamp(r, xs_[j], xs_[j + 1]));
        }
    }
    if (ys_.back() == xs_.back()) out.push_back(xs_.back());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

MonotonePL MonotonePL::restrict(double u, double v) const {
    if (!(u < v) || u < lo() || v > hi())
        fail(ErrorCode::OutOfDomain, "restriction interval not inside segment");
    std::vector<double> xs{u}, ys{eval(u)};
    for (std::size_t i = 0; i < xs_.size(); ++i)
        if (xs_[i] > u && xs_[i] < v) {
            xs.push_back(xs_[i]);
            ys.push_back(ys_[i]);
        }
    xs.push_back(v);
    ys.push_back(eval(v));
    return MonotonePL(std::move(xs), std::move(ys));
}

MonotonePL restrict_to_lap(const PMFunction& F, int lap_index) {
    if (F.lap_direction(lap_index) < 0)
        fail(ErrorCode::WrongLap, "lap is decreasing; increasing restriction requested");
    const auto lp = F.lap(lap_index);
    std::vector<double> xs{lp[0]}, ys{F.eval(lp[0])};
    for (std::size_t i = 0; i < F.xs().size(); ++i)
        if (F.xs()[i] > lp[0] && F.xs()[i] < lp[1]) {
            xs.push_back(F.xs()[i]);
            ys.push_back(F.ys()[i]);
        }
    xs.push_back(lp[1]);
    ys.push_back(F.eval(lp[1]));
    return MonotonePL(std::move(xs), std::move(ys));
}

namespace {

double apply_bend(double t, double bend) { return t + bend * t * (1.0 - t); }

double invert_bend(double s, double bend) {
    if (std::abs(bend) < 1e-12) return s;
    // Solve bend*t^2 - (1+bend)*t + s = 0 for the branch in [0,1].
    const double p = 1.0 + bend;
    const double disc = p * p - 4.0 * bend * s;
    const double root = (p - std::sqrt(std::max(disc, 0.0))) / (2.0 * bend);
    return std::clamp(root, 0.0, 1.0);
}

} // namespace

Seed::Seed(std::vector<double> us, std::vector<double> vs, double bend)
    : us_(std::move(us)), vs_(std::move(vs)), bend_(bend) {
    if (us_.size() < 2 || us_.size() != vs_.size())
        fail(ErrorCode::UnsortedAbscissae, "seed needs two matched control lists");
    if (!(std::abs(bend_) < 1.0))
        fail(ErrorCode::AnchorOutOfRange, "seed bend must lie in (-1,1)");
    for (std::size_t i = 0; i + 1 < us_.size(); ++i)
        if (!(us_[i] < us_[i + 1]))
            fail(ErrorCode::UnsortedAbscissae, "seed control abscissae not increasing");
    increasing_ = vs_.back() > vs_.front();
    for (std::size_t i = 0; i + 1 < vs_.size(); ++i) {
        const bool up = vs_[i + 1] > vs_[i];
        if (vs_[i + 1] == vs_[i] || up != increasing_)
            fail(ErrorCode::FlatSegment, "seed control ordinates not strictly monotone");
    }
}

double Seed::eval(double u) const {
    const double ulo = us_.front(), uhi = us_.back();
    constexpr double slack = 1e-12;
    if (u < ulo - slack || u > uhi + slack) fail(ErrorCode::OutOfDomain, "seed eval outside interval");
    u = std::clamp(u, ulo, uhi);
    auto it = std::upper_bound(us_.begin(), us_.end(), u);
    std::size_t j = (it == us_.begin()) ? 0 : static_cast<std::size_t>(it - us_.begin()) - 1;
    if (j + 1 >= us_.size()) j = us_.size() - 2;
    if (u == us_[j]) return vs_[j];
    if (u == us_[j + 1]) return vs_[j + 1];
    const double t = (u - us_[j]) / (us_[j + 1] - us_[j]);
    const double s = apply_bend(t, bend_);
    const double v = vs_[j] * (1.0 - s) + vs_[j + 1] * s;
    return std::clamp(v, std::min(vs_[j], vs_[j + 1]), std::max(vs_[j], vs_[j + 1]));
}

double Seed::eval_inverse(double v) const {
    const double vlo = increasing_ ? vs_.front() : vs_.back();
    const double vhi = increasing_ ? vs_.back() : vs_.front();
    constexpr double slack = 1e-12;
    if (v < vlo - slack || v > vhi + slack)
        fail(ErrorCode::OutOfDomain, "seed inverse outside value range");
    v = std::clamp(v, vlo, vhi);
    for (std::size_t j = 0; j + 1 < vs_.size(); ++j) {
        if (v == vs_[j]) return us_[j];
        if (v == vs_[j + 1]) return us_[j + 1];
        const bool inside = increasing_ ? (vs_[j] < v && v < vs_[j + 1])
                                        : (vs_[j + 1] < v && v < vs_[j]);
        if (inside) {
            const double s = (v - vs_[j]) / (vs_[j + 1] - vs_[j]);
            const double t = invert_bend(s, bend_);
            return std::clamp(us_[j] + t * (us_[j + 1] - us_[j]), us_[j], us_[j + 1]);
        }
    }
    if (increasing_) return v <= vs_.front() ? us_.front() : us_.back();
    return v >= vs_.front() ? us_.front() : us_.back();
}

} // namespace pmroot
