#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "eif/distribution.hpp"
#include "eif/expression.hpp"
#include "eif/quadrature.hpp"

namespace eif {

// A closed-form influence function together with |int phi dP|, computed once.
struct OracleEif {
    std::function<double(std::span<const double>)> fn;
    double centered_residual = 0.0;
    std::string provenance;

    double operator()(std::span<const double> u) const { return fn(u); }
    double operator()(const Point& u) const { return fn(u); }
};

// |int phi dP|.
double centering(const std::function<double(std::span<const double>)>& phi, const Distribution& p,
                 const QuadratureSettings& quad = {});

// 2 {p(u) - Psi(P)}: average density value, nonparametric model.
double np_avg_density_eif(const Distribution& p, std::span<const double> u, const QuadratureSettings& quad = {});
OracleEif np_avg_density_oracle(const DistPtr& p, const QuadratureSettings& quad = {});

// int (w - mu) p(w)^2 dw / int (w - mu)^2 p(w) dw.
double constrained_avg_density_coefficient(const Distribution& p, double mu, const QuadratureSettings& quad = {});

// 2 {p(u) - Psi(P) - c (u - mu)}: average density value under E[X] = mu.
double constrained_avg_density_eif(const Distribution& p, double mu, std::span<const double> u,
                                   const QuadratureSettings& quad = {});
OracleEif constrained_avg_density_oracle(const DistPtr& p, double mu, const QuadratureSettings& quad = {});

// phi_np - [int phi_np phi_tilde dP / int phi_tilde^2 dP] phi_tilde.
OracleEif project_onto_one_constraint(const OracleEif& phi_np, const OracleEif& phi_tilde, const DistPtr& p,
                                      const QuadratureSettings& quad = {});

// Projection of phi_np onto span{h_j - E h_j}: the EIF in the tilt family
// through P spanned by the basis.
OracleEif tilted_tangent_oracle(const OracleEif& phi_np, const std::vector<Expression>& basis, const DistPtr& p,
                                const QuadratureSettings& quad = {});

// Nonparametric EIF of the G-computation mean:
//   phi = m_0 - Psi + sum_{j=1}^{K+1} [a_0..a_{j-1} / prod_{r<j} g_r] (m_j - m_{j-1}).
double gcomp_np_eif(const DistPtr& p, std::span<const double> x, const QuadratureSettings& quad = {});
OracleEif gcomp_np_oracle(const DistPtr& p, const QuadratureSettings& quad = {});

// EIF in the Markov model: the inverse weights are replaced by
//   T_j = E[1 / prod_{r<j} g_r | L_j, L_{j-1}, abar_{j-1} = 1],
// computed by Bayes over the earlier covariates. Model-membership error when
// the law is not Markov.
double gcomp_markov_eif(const DistPtr& p, std::span<const double> x, const QuadratureSettings& quad = {});
OracleEif gcomp_markov_oracle(const DistPtr& p, const QuadratureSettings& quad = {});

// phi at x built from phi_j parts, for tests that inspect single terms.
std::vector<double> gcomp_markov_terms(const DistPtr& p, std::span<const double> x, const QuadratureSettings& quad = {});
std::vector<double> gcomp_np_terms(const DistPtr& p, std::span<const double> x, const QuadratureSettings& quad = {});

}  // namespace eif
