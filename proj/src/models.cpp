#include "funcgauss/models.hpp"

#include <cmath>

namespace funcgauss {

void validate(const BrownianModel& m) {
    if (!(m.sigma > 0.0) || !std::isfinite(m.sigma)) {
        throw StructuralError("brownian model: sigma must be positive");
    }
    if (m.theta < 0.0 || !std::isfinite(m.theta)) {
        throw StructuralError("brownian model: theta must be >= 0");
    }
    if (!std::isfinite(m.c)) {
        throw StructuralError("brownian model: c must be finite");
    }
}

void validate(const OUModel& m) {
    if (!(m.beta > 0.0) || !std::isfinite(m.beta)) {
        throw StructuralError("ou model: beta must be positive");
    }
    if (!(m.sigma > 0.0) || !std::isfinite(m.sigma)) {
        throw StructuralError("ou model: sigma must be positive");
    }
    if (!std::isfinite(m.eta) || !std::isfinite(m.c0)) {
        throw StructuralError("ou model: eta and c0 must be finite");
    }
}

Curve simulate_brownian(const BrownianModel& model, bool with_drift, const Grid& grid, Rng& rng) {
    validate(model);
    const int n = grid.segments();
    const double dt = grid.delta();
    const double drift = with_drift ? model.c * dt : 0.0;
    const double sd = model.sigma * std::sqrt(dt);
    std::vector<double> x(static_cast<std::size_t>(n) + 1);
    x[0] = model.theta == 0.0 ? 0.0 : model.theta * rng.normal();
    for (int j = 0; j < n; ++j) {
        x[static_cast<std::size_t>(j) + 1] = x[static_cast<std::size_t>(j)] + drift + sd * rng.normal();
    }
    return Curve(grid, std::move(x));
}

Curve simulate_brownian(const BrownianModel& model, bool with_drift, const Grid& grid, RngSeed seed) {
    Rng rng(seed);
    return simulate_brownian(model, with_drift, grid, rng);
}

Curve simulate_ou(const OUModel& model, const Grid& grid, Rng& rng) {
    validate(model);
    const int n = grid.segments();
    const double a = std::exp(-model.beta * grid.delta());
    const double mean_step = model.eta * (1.0 - a);
    const double sd = model.sigma * std::sqrt(1.0 - a * a);
    std::vector<double> x(static_cast<std::size_t>(n) + 1);
    x[0] = model.start == StartKind::Deterministic ? model.c0 : model.eta + model.sigma * rng.normal();
    for (int j = 0; j < n; ++j) {
        x[static_cast<std::size_t>(j) + 1] = a * x[static_cast<std::size_t>(j)] + mean_step + sd * rng.normal();
    }
    return Curve(grid, std::move(x));
}

Curve simulate_ou(const OUModel& model, const Grid& grid, RngSeed seed) {
    Rng rng(seed);
    return simulate_ou(model, grid, rng);
}

Curve simulate(const ClassLaw& law, const Grid& grid, Rng& rng) {
    return std::visit(
        [&](const auto& m) -> Curve {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, BrownianLaw>) {
                return simulate_brownian(m.model, m.with_drift, grid, rng);
            } else {
                return simulate_ou(m, grid, rng);
            }
        },
        law);
}

CurveMatrix simulate_matrix(const ClassLaw& law, int n, const Grid& grid, Rng& rng) {
    if (n < 1) {
        throw StructuralError("simulate_matrix: n must be >= 1");
    }
    CurveMatrix out(n, grid.size());
    for (int i = 0; i < n; ++i) {
        const Curve c = simulate(law, grid, rng);
        for (int j = 0; j < grid.size(); ++j) out(i, j) = c[j];
    }
    return out;
}

LabeledSample sample_labeled(const ClassLaw& law0, const ClassLaw& law1, int n0, int n1,
                             Prior prior, const Grid& grid, Rng& rng) {
    if (n0 < 1 || n1 < 1) {
        throw StructuralError("sample_labeled: class sizes must be >= 1");
    }
    CurveMatrix values(n0 + n1, grid.size());
    values.topRows(n0) = simulate_matrix(law0, n0, grid, rng);
    values.bottomRows(n1) = simulate_matrix(law1, n1, grid, rng);
    std::vector<int> labels(static_cast<std::size_t>(n0), 0);
    labels.insert(labels.end(), static_cast<std::size_t>(n1), 1);
    return LabeledSample(grid, std::move(values), std::move(labels), prior);
}

LabeledSample sample_labeled(const ClassLaw& law0, const ClassLaw& law1, int n0, int n1,
                             Prior prior, const Grid& grid, RngSeed seed) {
    Rng rng(seed);
    return sample_labeled(law0, law1, n0, n1, prior, grid, rng);
}

namespace {

TriangularSpec brownian_spec(const BrownianLaw& law, const Grid& grid) {
    validate(law.model);
    const int sz = grid.size();
    const double ce = law.with_drift ? law.model.c : 0.0;
    const double s2 = law.model.sigma * law.model.sigma;
    const double t2 = law.model.theta * law.model.theta;
    std::vector<double> m(static_cast<std::size_t>(sz)), dm(static_cast<std::size_t>(sz), ce),
        d2m(static_cast<std::size_t>(sz), 0.0), u(static_cast<std::size_t>(sz)),
        du(static_cast<std::size_t>(sz), s2), d2u(static_cast<std::size_t>(sz), 0.0),
        v(static_cast<std::size_t>(sz), 1.0), dv(static_cast<std::size_t>(sz), 0.0),
        d2v(static_cast<std::size_t>(sz), 0.0);
    for (int j = 0; j < sz; ++j) {
        const double t = grid.time(j);
        m[static_cast<std::size_t>(j)] = ce * t;
        u[static_cast<std::size_t>(j)] = t2 + s2 * t;
    }
    return TriangularSpec(grid, std::move(m), std::move(dm), std::move(d2m), std::move(u),
                          std::move(du), std::move(d2u), std::move(v), std::move(dv), std::move(d2v));
}

TriangularSpec ou_spec(const OUModel& model, const Grid& grid) {
    validate(model);
    const int sz = grid.size();
    const double b = model.beta;
    const double s2 = model.sigma * model.sigma;
    std::vector<double> m(static_cast<std::size_t>(sz)), dm(static_cast<std::size_t>(sz)),
        d2m(static_cast<std::size_t>(sz)), u(static_cast<std::size_t>(sz)),
        du(static_cast<std::size_t>(sz)), d2u(static_cast<std::size_t>(sz)),
        v(static_cast<std::size_t>(sz)), dv(static_cast<std::size_t>(sz)),
        d2v(static_cast<std::size_t>(sz));
    if (model.start == StartKind::Deterministic) {
        if (model.c0 != 0.0) {
            throw AdmissibilityError("ou deterministic start must be at 0 (u(0)=0 forces m(0)=0)");
        }
        for (int j = 0; j < sz; ++j) {
            const auto k = static_cast<std::size_t>(j);
            const double t = grid.time(j);
            const double e = std::exp(-b * t);
            m[k] = model.eta * (1.0 - e);
            dm[k] = model.eta * b * e;
            d2m[k] = -model.eta * b * b * e;
            u[k] = s2 * std::exp(-b) * (std::exp(b * t) - e);
            du[k] = s2 * b * std::exp(-b) * (std::exp(b * t) + e);
            d2u[k] = b * b * u[k];
            v[k] = std::exp(b * (1.0 - t));
            dv[k] = -b * v[k];
            d2v[k] = b * b * v[k];
        }
    } else {
        for (int j = 0; j < sz; ++j) {
            const auto k = static_cast<std::size_t>(j);
            const double t = grid.time(j);
            m[k] = model.eta;
            dm[k] = 0.0;
            d2m[k] = 0.0;
            u[k] = s2 * std::exp(-b * (1.0 - t));
            du[k] = b * u[k];
            d2u[k] = b * b * u[k];
            v[k] = std::exp(b * (1.0 - t));
            dv[k] = -b * v[k];
            d2v[k] = b * b * v[k];
        }
    }
    return TriangularSpec(grid, std::move(m), std::move(dm), std::move(d2m), std::move(u),
                          std::move(du), std::move(d2u), std::move(v), std::move(dv), std::move(d2v));
}

}  // namespace

TriangularSpec closed_form_spec(const ClassLaw& law, const Grid& grid) {
    return std::visit(
        [&](const auto& m) -> TriangularSpec {
            if constexpr (std::is_same_v<std::decay_t<decltype(m)>, BrownianLaw>) {
                return brownian_spec(m, grid);
            } else {
                return ou_spec(m, grid);
            }
        },
        law);
}

}  // namespace funcgauss
