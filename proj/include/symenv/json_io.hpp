#pragma once

#include <nlohmann/json.hpp>

#include "symenv/envelope.hpp"
#include "symenv/hermitian.hpp"
#include "symenv/integrals.hpp"
#include "symenv/projective.hpp"

namespace symenv {

using nlohmann::json;

// Points serialize as arrays of [re, im] pairs plus the shape {n, k}.
inline json to_json(const ProjectivePoint& p) {
  json coords = json::array();
  for (Eigen::Index i = 0; i < p.coords().size(); ++i)
    coords.push_back({p.coords()[i].real(), p.coords()[i].imag()});
  return {{"coords", coords}, {"shape", {{"n", p.shape().n}, {"k", p.shape().k}}}};
}

inline ProjectivePoint point_from_json(const json& j) {
  const TupleShape shape(j.at("shape").at("n").get<int>(), j.at("shape").at("k").get<int>());
  const auto& coords = j.at("coords");
  CVector z(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i)
    z[i] = Complex(coords[i][0].get<double>(), coords[i][1].get<double>());
  return ProjectivePoint(z, shape);
}

// Matrix as nested arrays of [re, im].
inline json to_json(const HermitianForm& h) {
  json rows = json::array();
  for (int i = 0; i < h.dim(); ++i) {
    json row = json::array();
    for (int j2 = 0; j2 < h.dim(); ++j2)
      row.push_back({h.entries()(i, j2).real(), h.entries()(i, j2).imag()});
    rows.push_back(row);
  }
  return rows;
}

inline json to_json(const IntegralEstimate& e, double alpha, int m) {
  json j = {{"value", e.value},
            {"stderr", e.abs_error_estimate},
            {"method", method_name(e.method)},
            {"nodes_or_samples", e.samples_or_nodes},
            {"alpha", alpha},
            {"m", m}};
  if (e.seed) j["seed"] = *e.seed;
  return j;
}

inline json to_json(const EnvelopeReport& r) {
  return {{"min_gap", r.min_gap},
          {"argmin", r.argmin},
          {"violations", r.monotone_violations},
          {"points_scanned", r.points_scanned},
          {"grid",
           {{"delta", r.grid.delta},
            {"points_per_axis", r.grid.points_per_axis},
            {"log_spacing", r.grid.log_spacing}}},
          {"shape", {{"n", r.shape.n}, {"k", r.shape.k}}}};
}

}  // namespace symenv
