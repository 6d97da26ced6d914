#pragma once

#include <variant>

#include "funcgauss/rng.hpp"
#include "funcgauss/sample.hpp"
#include "funcgauss/triangular.hpp"

namespace funcgauss {

// Brownian motion pair: class 0 has mean m0(t) = c t, class 1 has m1 = 0;
// both start at N(0, theta^2) (theta = 0 means they start at 0 exactly) and
// share the diffusion scale sigma.
struct BrownianModel {
    double c = 0.0;
    double sigma = 1.0;
    double theta = 0.0;
};

enum class StartKind { Deterministic, RandomStationary };

// dX = -beta (X - eta) dt + sqrt(2 beta) sigma dW, so sigma is the
// stationary standard deviation.
struct OUModel {
    double beta = 1.0;
    double eta = 0.0;
    double sigma = 1.0;
    StartKind start = StartKind::Deterministic;
    double c0 = 0.0;  // deterministic start point; the likelihood-ratio factorization needs 0
};

void validate(const BrownianModel& m);
void validate(const OUModel& m);

// Exact discrete-time laws; no Euler error.
Curve simulate_brownian(const BrownianModel& model, bool with_drift, const Grid& grid, Rng& rng);
Curve simulate_brownian(const BrownianModel& model, bool with_drift, const Grid& grid, RngSeed seed);
Curve simulate_ou(const OUModel& model, const Grid& grid, Rng& rng);
Curve simulate_ou(const OUModel& model, const Grid& grid, RngSeed seed);

// One class's data-generating process, as the harness sees it.
struct BrownianLaw {
    BrownianModel model;
    bool with_drift = false;
};
using ClassLaw = std::variant<BrownianLaw, OUModel>;

Curve simulate(const ClassLaw& law, const Grid& grid, Rng& rng);
// n curves stacked row-wise.
CurveMatrix simulate_matrix(const ClassLaw& law, int n, const Grid& grid, Rng& rng);

// n0 curves from law0 labeled 0 followed by n1 from law1 labeled 1.
LabeledSample sample_labeled(const ClassLaw& law0, const ClassLaw& law1, int n0, int n1,
                             Prior prior, const Grid& grid, Rng& rng);
LabeledSample sample_labeled(const ClassLaw& law0, const ClassLaw& law1, int n0, int n1,
                             Prior prior, const Grid& grid, RngSeed seed);

// Mean, u, v and derivatives of the law, tabulated exactly on the grid.
TriangularSpec closed_form_spec(const ClassLaw& law, const Grid& grid);

}  // namespace funcgauss
