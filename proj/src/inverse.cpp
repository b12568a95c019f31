#include <cmath>
#include <limits>

#include "lsgf/dictionary.hpp"

namespace lsgf {

namespace {

Signal frame_operator(const Dictionary& d, const Signal& f) { return synthesis(d, analysis(d, f)); }

void check_bounds(double A, double B) {
    if (!(A > 0.0)) throw Error("frame bound A must be positive");
    if (!(B >= A)) throw Error("frame bound B must be at least A");
}

} // namespace

InverseResult inverse_cg(const Dictionary& d, const Coefficients& c, double tol, std::size_t max_iter) {
    InverseResult res;
    const Signal b = synthesis(d, c);
    const auto n = static_cast<Eigen::Index>(d.size());
    res.f = Signal::Zero(n);
    if (d.eig() && d.complete_sampling()) {
        const auto fb = frame_bounds(d);
        res.rank_deficient = fb.A <= 1e-12 * fb.B;
    }
    const double bnorm = b.norm();
    if (bnorm == 0.0) return res;

    Signal x = Signal::Zero(n);
    Signal r = b;
    Signal p = r;
    double rs = r.squaredNorm();
    double best = std::sqrt(rs) / bnorm;
    res.relative_residual = best;
    res.converged = false;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        const Signal sp = frame_operator(d, p);
        const double denom = p.dot(sp);
        if (!(denom > std::numeric_limits<double>::min())) {
            res.rank_deficient = true;
            break;
        }
        const double alpha = rs / denom;
        x += alpha * p;
        r -= alpha * sp;
        const double rs_new = r.squaredNorm();
        const double rel = std::sqrt(rs_new) / bnorm;
        res.iterations = it;
        if (rel < best) {
            best = rel;
            res.f = x;
            res.relative_residual = rel;
        }
        if (rel <= tol) {
            res.converged = true;
            break;
        }
        p = r + (rs_new / rs) * p;
        rs = rs_new;
    }
    return res;
}

Signal inverse_frame_iteration(const Dictionary& d, const Coefficients& c, double A, double B, std::size_t T) {
    check_bounds(A, B);
    const double w = 2.0 / (A + B);
    const Signal f0 = w * synthesis(d, c);
    Signal f = f0;
    for (std::size_t t = 1; t <= T; ++t) f = f0 + f - w * frame_operator(d, f);
    return f;
}

Signal inverse_single_pass(const Dictionary& d, const Coefficients& c, double A, double B) {
    check_bounds(A, B);
    return (2.0 / (A + B)) * synthesis(d, c);
}

InverseMethod parse_inverse(const std::string& s) {
    if (s == "cg") return InverseMethod::cg;
    if (s == "frame_iter" || s == "frame-iter") return InverseMethod::frame_iter;
    if (s == "single_pass" || s == "single-pass") return InverseMethod::single_pass;
    throw Error("unknown inverse method '" + s + "'");
}

Signal invert(const Dictionary& d, const Coefficients& c, InverseMethod method, std::size_t iterations) {
    if (method == InverseMethod::cg) return inverse_cg(d, c).f;
    const auto fb = frame_bounds(d);
    if (method == InverseMethod::frame_iter) return inverse_frame_iteration(d, c, fb.A, fb.B, iterations);
    return inverse_single_pass(d, c, fb.A, fb.B);
}

} // namespace lsgf
