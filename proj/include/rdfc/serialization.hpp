#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "rdfc/coord_synth.hpp"
#include "rdfc/discrete_rr.hpp"
#include "rdfc/finite_blocklength.hpp"
#include "rdfc/gaussian_ldp.hpp"
#include "rdfc/quadrature.hpp"

// JSON adapters for the types that cross the CLI boundary. Deserializers
// validate through the same entry points the library uses, so a malformed
// file fails with the library's own domain errors.

namespace rdfc::quad {

inline void to_json(nlohmann::json& j, const QuadratureSpec& spec) {
  j = nlohmann::json{{"abs_tol", spec.abs_tol},
                     {"max_evals", spec.max_evals},
                     {"half_width_in_sigmas", spec.half_width_in_sigmas}};
}

inline void from_json(const nlohmann::json& j, QuadratureSpec& spec) {
  spec.abs_tol = j.at("abs_tol").get<double>();
  spec.max_evals = j.at("max_evals").get<int>();
  spec.half_width_in_sigmas = j.at("half_width_in_sigmas").get<double>();
}

}  // namespace rdfc::quad

namespace rdfc::discrete_rr {

inline void to_json(nlohmann::json& j, const JointPmf& pmf) {
  j = nlohmann::json{{"k", pmf.k}, {"q", pmf.q}};
}

inline void from_json(const nlohmann::json& j, JointPmf& pmf) {
  pmf.k = j.at("k").get<int>();
  pmf.q = j.at("q").get<std::vector<double>>();
  validate(pmf);
}

inline void to_json(nlohmann::json& j, const BscMixtureParams& p) {
  j = nlohmann::json{{"p1", p.p1}, {"p2", p.p2}, {"p3", p.p3},
                     {"p4", p.p4}, {"c", p.c},   {"d", p.d}};
}

inline void from_json(const nlohmann::json& j, BscMixtureParams& p) {
  p.p1 = j.at("p1").get<double>();
  p.p2 = j.at("p2").get<double>();
  p.p3 = j.at("p3").get<double>();
  p.p4 = j.at("p4").get<double>();
  p.c = j.at("c").get<double>();
  p.d = j.at("d").get<double>();
  validate(p);
}

}  // namespace rdfc::discrete_rr

namespace rdfc::gaussian_ldp {

inline void to_json(nlohmann::json& j, const GaussianLdpConfig& cfg) {
  j = nlohmann::json{{"sigma_x", cfg.sigma_x},
                     {"clip_c", cfg.clip_c},
                     {"epsilon", cfg.epsilon},
                     {"delta", cfg.delta}};
}

inline void from_json(const nlohmann::json& j, GaussianLdpConfig& cfg) {
  cfg.sigma_x = j.at("sigma_x").get<double>();
  cfg.clip_c = j.at("clip_c").get<double>();
  cfg.epsilon = j.at("epsilon").get<double>();
  cfg.delta = j.at("delta").get<double>();
  validate(cfg);
}

}  // namespace rdfc::gaussian_ldp

namespace rdfc::fbl {

inline void to_json(nlohmann::json& j, const FblConfig& cfg) {
  j = nlohmann::json{{"rate_R", cfg.rate_R},   {"n", cfg.n},
                     {"epsilon", cfg.epsilon}, {"delta", cfg.delta},
                     {"a", cfg.slack_a},       {"K", cfg.K}};
}

inline void from_json(const nlohmann::json& j, FblConfig& cfg) {
  cfg.rate_R = j.at("rate_R").get<double>();
  cfg.n = j.at("n").get<int>();
  cfg.epsilon = j.at("epsilon").get<double>();
  cfg.delta = j.at("delta").get<double>();
  cfg.slack_a = j.at("a").get<double>();
  cfg.K = j.at("K").get<double>();
  validate(cfg);
}

inline void to_json(nlohmann::json& j, const FblResult& r) {
  j = nlohmann::json{{"rho_star", r.rho_star},
                     {"branch", r.at_half ? "half" : "interior"},
                     {"exponent", r.exponent},
                     {"delta_cap_n", r.delta_cap_n},
                     {"delta_n", r.delta_n}};
}

inline void from_json(const nlohmann::json& j, FblResult& r) {
  r.rho_star = j.at("rho_star").get<double>();
  r.at_half = j.at("branch").get<std::string>() == "half";
  r.exponent = j.at("exponent").get<double>();
  r.delta_cap_n = j.at("delta_cap_n").get<double>();
  r.delta_n = j.at("delta_n").get<double>();
}

}  // namespace rdfc::fbl

namespace rdfc::synth {

inline void to_json(nlohmann::json& j, const CoordinationScheme& s) {
  j = nlohmann::json{{"p_u", s.p_u},
                     {"p_x_given_u", s.p_x_given_u},
                     {"p_y_given_u", s.p_y_given_u}};
}

inline void from_json(const nlohmann::json& j, CoordinationScheme& s) {
  s.p_u = j.at("p_u").get<std::vector<double>>();
  s.p_x_given_u = j.at("p_x_given_u").get<std::vector<std::vector<double>>>();
  s.p_y_given_u = j.at("p_y_given_u").get<std::vector<std::vector<double>>>();
  validate(s);
}

}  // namespace rdfc::synth
