#include "funcgauss/triangular.hpp"

#include <algorithm>
#include <cmath>

namespace funcgauss {

namespace {

void check_len(const Grid& g, const std::vector<double>& a, const char* what) {
    if (static_cast<int>(a.size()) != g.size()) {
        throw StructuralError(std::string("triangular spec: bad length for ") + what);
    }
    for (double x : a) {
        if (!std::isfinite(x)) {
            throw StructuralError(std::string("triangular spec: non-finite ") + what);
        }
    }
}

struct Functional {
    double constant = 0.0;
    std::vector<double> lin;   // full-grid-sized, zero below the window
    std::vector<double> quad;
};

// Trapezoid weights over [t_lo, 1], full-grid indexing.
std::vector<double> window_weights(const Grid& g, int lo) {
    std::vector<double> w(static_cast<std::size_t>(g.size()), 0.0);
    const int n = g.segments();
    const double dt = g.delta();
    for (int j = lo; j <= n; ++j) w[static_cast<std::size_t>(j)] = dt;
    w[static_cast<std::size_t>(lo)] = dt / 2;
    w[static_cast<std::size_t>(n)] = dt / 2;
    return w;
}

// Mean-shift factor: log dP_{m,Gamma}/dP_{0,Gamma} on [t_a, 1].  With
// G = (v m' - m v')/(v u' - u v') the log density is
//   D3 - (1/2) int G d(m/v) + (D2 - G(a)/v(a)) x(a) + (G(b)/v(b)) x(b)
//   - int_a^b (x/v) G' dt,
// D2 = m(a)/(u(a)v(a)) and D3 = -m(a)^2/(2 u(a) v(a)) when u(a) > 0 and both
// zero when u(a) = 0 (which forces m(a) = 0).
Functional mean_shift_functional(const TriangularSpec& s, int a) {
    const Grid& g = s.grid;
    const int n = g.segments();
    if (a < 0 || a >= n) {
        throw StructuralError("left cut out of range");
    }
    const int sz = g.size();
    std::vector<double> gfun(static_cast<std::size_t>(sz)), dg(static_cast<std::size_t>(sz)),
        dmov(static_cast<std::size_t>(sz));
    for (int j = a; j < sz; ++j) {
        const auto k = static_cast<std::size_t>(j);
        const double v = s.v[k];
        if (v <= kSingularTol) {
            throw SingularityError("v not bounded away from zero on the window");
        }
        const double p = v * s.dm[k] - s.m[k] * s.dv[k];
        const double q = v * s.du[k] - s.u[k] * s.dv[k];
        if (std::abs(q) <= kSingularTol) {
            throw SingularityError("v u' - u v' vanishes: measures may be mutually singular");
        }
        gfun[k] = p / q;
        const double dp = v * s.d2m[k] - s.m[k] * s.d2v[k];
        const double dq = v * s.d2u[k] - s.u[k] * s.d2v[k];
        dg[k] = (dp * q - p * dq) / (q * q);
        dmov[k] = p / (v * v);  // (m/v)'
    }

    double d2 = 0.0, d3 = 0.0;
    const auto ka = static_cast<std::size_t>(a);
    if (s.u[ka] > kUZeroTol) {
        const double var0 = s.u[ka] * s.v[ka];
        d2 = s.m[ka] / var0;
        d3 = -s.m[ka] * s.m[ka] / (2.0 * var0);
    } else if (a > 0) {
        throw SingularityError("u(t) not positive at the window start");
    } else if (std::abs(s.m[ka]) > 1e-9) {
        throw AdmissibilityError("u(0)=0 requires m(0)=0");
    }

    const auto w = window_weights(g, a);
    Functional out;
    out.lin.assign(static_cast<std::size_t>(sz), 0.0);
    double stieltjes = 0.0;
    for (int j = a; j < sz; ++j) {
        const auto k = static_cast<std::size_t>(j);
        stieltjes += w[k] * gfun[k] * dmov[k];
        out.lin[k] = -w[k] * dg[k] / s.v[k];
    }
    out.constant = d3 - 0.5 * stieltjes;
    out.lin[ka] += d2 - gfun[ka] / s.v[ka];
    out.lin[static_cast<std::size_t>(n)] += gfun[static_cast<std::size_t>(n)] / s.v[static_cast<std::size_t>(n)];
    return out;
}

// Covariance-change factor: log dP_{0,Gamma0}/dP_{0,Gamma1} on [t_a, 1], with
// F = (v1 v0' - v0 v1')/(v1 u1' - u1 v1'):
//   log C1 + (1/2)[C3 x^2(a) + C2 x^2(b) - int_a^b x^2 F'/(v0 v1) dt].
Functional zero_mean_functional(const TriangularSpec& s0, const TriangularSpec& s1, int a) {
    const Grid& g = s0.grid;
    if (!g.same_as(s1.grid)) {
        throw StructuralError("zero-mean factor: specs on different grids");
    }
    const int n = g.segments();
    if (a < 0 || a >= n) {
        throw StructuralError("left cut out of range");
    }
    const int sz = g.size();
    std::vector<double> f(static_cast<std::size_t>(sz)), df(static_cast<std::size_t>(sz));
    for (int j = a; j < sz; ++j) {
        const auto k = static_cast<std::size_t>(j);
        if (s0.v[k] <= kSingularTol || s1.v[k] <= kSingularTol) {
            throw SingularityError("v not bounded away from zero on the window");
        }
        const double p = s1.v[k] * s0.dv[k] - s0.v[k] * s1.dv[k];
        const double q = s1.v[k] * s1.du[k] - s1.u[k] * s1.dv[k];
        if (std::abs(q) <= kSingularTol) {
            throw SingularityError("v1 u1' - u1 v1' vanishes: measures may be mutually singular");
        }
        f[k] = p / q;
        const double dp = s1.v[k] * s0.d2v[k] - s0.v[k] * s1.d2v[k];
        const double dq = s1.v[k] * s1.d2u[k] - s1.u[k] * s1.d2v[k];
        df[k] = (dp * q - p * dq) / (q * q);
    }

    const auto ka = static_cast<std::size_t>(a);
    const auto kb = static_cast<std::size_t>(n);
    double log_c1, c4;
    if (s0.u[ka] > kUZeroTol) {
        if (s1.u[ka] <= kUZeroTol) {
            throw (a == 0 ? AdmissibilityError("u0(0)=0 iff u1(0)=0 violated")
                          : AdmissibilityError("u1(t) not positive at the window start"));
        }
        log_c1 = 0.5 * (std::log(s1.u[ka]) + std::log(s1.v[kb]) - std::log(s0.v[kb]) - std::log(s0.u[ka]));
        c4 = (s0.v[ka] * s0.u[ka] - s1.u[ka] * s1.v[ka]) /
             (s1.v[ka] * s0.v[ka] * s0.u[ka] * s1.u[ka]);
    } else if (a > 0) {
        throw SingularityError("u(t) not positive at the window start");
    } else {
        if (s1.u[ka] > kUZeroTol) {
            throw AdmissibilityError("u0(0)=0 iff u1(0)=0 violated");
        }
        log_c1 = 0.5 * (std::log(s0.v[ka]) + std::log(s1.v[kb]) - std::log(s0.v[kb]) - std::log(s1.v[ka]));
        c4 = 0.0;
    }
    const double c3 = c4 - f[ka] / (s0.v[ka] * s1.v[ka]);
    const double c2 = f[kb] / (s0.v[kb] * s1.v[kb]);

    const auto w = window_weights(g, a);
    Functional out;
    out.quad.assign(static_cast<std::size_t>(sz), 0.0);
    for (int j = a; j < sz; ++j) {
        const auto k = static_cast<std::size_t>(j);
        out.quad[k] = -0.5 * w[k] * df[k] / (s0.v[k] * s1.v[k]);
    }
    out.constant = log_c1;
    out.quad[ka] += 0.5 * c3;
    out.quad[kb] += 0.5 * c2;
    return out;
}

double apply_functional(const Functional& f, std::span<const double> x) {
    double acc = f.constant;
    if (!f.lin.empty()) {
        for (std::size_t j = 0; j < x.size(); ++j) acc += f.lin[j] * x[j];
    }
    if (!f.quad.empty()) {
        for (std::size_t j = 0; j < x.size(); ++j) acc += f.quad[j] * x[j] * x[j];
    }
    return acc;
}

}  // namespace

TriangularSpec::TriangularSpec(Grid g, std::vector<double> m_, std::vector<double> dm_,
                               std::vector<double> d2m_, std::vector<double> u_,
                               std::vector<double> du_, std::vector<double> d2u_,
                               std::vector<double> v_, std::vector<double> dv_,
                               std::vector<double> d2v_)
    : grid(std::move(g)),
      m(std::move(m_)), dm(std::move(dm_)), d2m(std::move(d2m_)),
      u(std::move(u_)), du(std::move(du_)), d2u(std::move(d2u_)),
      v(std::move(v_)), dv(std::move(dv_)), d2v(std::move(d2v_)) {
    check_len(grid, m, "m");
    check_len(grid, dm, "m'");
    check_len(grid, d2m, "m''");
    check_len(grid, u, "u");
    check_len(grid, du, "u'");
    check_len(grid, d2u, "u''");
    check_len(grid, v, "v");
    check_len(grid, dv, "v'");
    check_len(grid, d2v, "v''");
    if (std::abs(v.back() - 1.0) > 1e-8) {
        throw StructuralError("triangular spec: normalization v(1)=1 violated");
    }
}

double log_rn_zero_mean(const TriangularSpec& spec0, const TriangularSpec& spec1, const Curve& x,
                        int left_cut) {
    if (!x.grid().same_as(spec0.grid)) {
        throw StructuralError("curve grid does not match spec grid");
    }
    return apply_functional(zero_mean_functional(spec0, spec1, left_cut), x.values());
}

double log_rn_mean_shift(const TriangularSpec& spec, const Curve& x, int left_cut) {
    if (!x.grid().same_as(spec.grid)) {
        throw StructuralError("curve grid does not match spec grid");
    }
    return apply_functional(mean_shift_functional(spec, left_cut), x.values());
}

LogRnEvaluator compose_chain(const TriangularSpec& spec0, const TriangularSpec& spec1, int left_cut) {
    if (!spec0.grid.same_as(spec1.grid)) {
        throw StructuralError("compose_chain: specs on different grids");
    }
    const auto f0 = mean_shift_functional(spec0, left_cut);
    const auto fz = zero_mean_functional(spec0, spec1, left_cut);
    const auto f1 = mean_shift_functional(spec1, left_cut);

    LogRnEvaluator ev(spec0.grid, left_cut);
    const auto sz = static_cast<std::size_t>(spec0.grid.size());
    ev.constant_ = f0.constant + fz.constant - f1.constant;
    ev.lin_.assign(sz, 0.0);
    ev.quad_ = fz.quad;
    for (std::size_t j = 0; j < sz; ++j) {
        ev.lin_[j] = f0.lin[j] - f1.lin[j];
    }
    return ev;
}

double LogRnEvaluator::log_rn(std::span<const double> values) const {
    if (static_cast<int>(values.size()) != grid_.size()) {
        throw StructuralError("curve length does not match evaluator grid");
    }
    double acc = constant_;
    for (std::size_t j = static_cast<std::size_t>(left_); j < values.size(); ++j) {
        acc += (lin_[j] + quad_[j] * values[j]) * values[j];
    }
    return acc;
}

double LogRnEvaluator::log_rn(const Curve& x) const {
    if (!x.grid().same_as(grid_)) {
        throw StructuralError("curve grid does not match evaluator grid");
    }
    return log_rn(std::span<const double>(x.values()));
}

double eta(double log_rn, double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw StructuralError("prior p must lie in (0,1)");
    }
    // eta = 1 / (1 + exp(z)), z = log_rn + logit(p); evaluate the stable branch.
    const double z = log_rn + std::log(p / (1.0 - p));
    if (z >= 0.0) {
        const double e = std::exp(-z);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(z));
}

int classify(double log_rn, double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw StructuralError("prior p must lie in (0,1)");
    }
    // eta > 1/2 iff f < (1-p)/p iff log f < log((1-p)/p); ties go to 0.
    return log_rn < std::log((1.0 - p) / p) ? 1 : 0;
}

}  // namespace funcgauss
