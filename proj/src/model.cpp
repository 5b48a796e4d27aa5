#include "z2lab/model.hpp"

#include <cmath>
#include <sstream>

#include "z2lab/conditional.hpp"

namespace z2lab {

std::string describe(const Measure& m) {
  if (const auto* s = std::get_if<SmoothMeasure>(&m)) {
    return "smooth_p(" + std::to_string(s->p) + ")";
  }
  return "hard_interval";
}

void ModelParams::validate() const {
  auto fail = [](const std::string& field, double v, const char* why) {
    std::ostringstream os;
    os << "model." << field << ": " << why << " (got " << v << ")";
    throw ParameterError(os.str());
  };
  if (!(beta >= 0.0) || !std::isfinite(beta)) fail("beta", beta, "must be finite and >= 0");
  if (!(omega >= 0.0) || !std::isfinite(omega)) fail("omega", omega, "must be finite and >= 0");
  if (!(beta_spatial >= 0.0)) fail("beta_spatial", beta_spatial, "must be >= 0");
  if (const auto* s = std::get_if<SmoothMeasure>(&measure); s && s->p < 1) {
    fail("measure.p", s->p, "must be a positive integer");
  }
}

double plaquette_value(const GaugeField& field, std::size_t p) {
  const auto links = field.geometry->plaquette_link_indices(p);
  return field.values[links[0]] * field.values[links[1]] *
         field.values[links[2]] * field.values[links[3]];
}

double action(const GaugeField& field, const ModelParams& params) {
  const LatticeGeometry& g = *field.geometry;
  double plaq = 0.0;
  for (std::size_t p = 0; p < g.plaquette_count(); ++p) {
    const double c = g.spatial_plaquette(p) ? params.beta_spatial : params.beta;
    if (c != 0.0) plaq += c * plaquette_value(field, p);
  }
  double quad = 0.0;
  for (double v : field.values) quad += v * v;
  return -plaq + params.link_damping() * quad;
}

double staple_sum(const GaugeField& field, const ModelParams& params,
                  std::size_t link) {
  const LatticeGeometry& g = *field.geometry;
  const double* v = field.values.data();
  double h = 0.0;
  for (const Staple& st : g.staples(link)) {
    const double c = g.spatial_plaquette(st.plaquette) ? params.beta_spatial
                                                       : params.beta;
    h += c * v[st.others[0]] * v[st.others[1]] * v[st.others[2]];
  }
  return h;
}

void heatbath_update(GaugeField& field, const ModelParams& params,
                     std::size_t link, Rng& rng) {
  const BoundedConditional cond(staple_sum(field, params, link),
                                params.link_damping());
  field.values[link] = cond.sample(rng);
}

double reflect_into_interval(double t) {
  if (t > 1.0) return 2.0 - t;
  if (t < -1.0) return -2.0 - t;
  return t;
}

bool metropolis_update(GaugeField& field, const ModelParams& params,
                       std::size_t link, Rng& rng, double width) {
  const double old = field.values[link];
  const double proposal = reflect_into_interval(old + rng.uniform(-width, width));
  const double h = staple_sum(field, params, link);
  const double delta = -h * (proposal - old) +
                       params.link_damping() * (proposal * proposal - old * old);
  if (delta <= 0.0 || rng.uniform() < std::exp(-delta)) {
    field.values[link] = proposal;
    return true;
  }
  return false;
}

SweepStats sweep(GaugeField& field, const ModelParams& params, Rng& rng,
                 const SweepScheme& scheme) {
  if (!std::holds_alternative<HardInterval>(params.measure)) {
    throw ParameterError(
        "gauge sweeps support the hard-interval measure only");
  }
  if (params.frozen_spatial()) {
    throw ParameterError(
        "beta_spatial = infinity is realised by the two-wall model, not by "
        "gauge sweeps");
  }
  SweepStats stats;
  const std::size_t n = field.values.size();
  stats.proposed = n;
  if (scheme.kind == SweepScheme::Kind::heatbath) {
    for (std::size_t l = 0; l < n; ++l) heatbath_update(field, params, l, rng);
    stats.accepted = n;
  } else {
    if (!(scheme.width > 0.0 && scheme.width <= 2.0)) {
      throw ParameterError("sampler.width must lie in (0, 2]");
    }
    for (std::size_t l = 0; l < n; ++l) {
      if (metropolis_update(field, params, l, rng, scheme.width)) ++stats.accepted;
    }
  }
  return stats;
}

GaugeField random_field(GeometryPtr geometry, Rng& rng) {
  GaugeField f(std::move(geometry));
  for (double& v : f.values) v = rng.uniform(-1.0, 1.0);
  return f;
}

SignMagnitude decompose_sign_magnitude(const GaugeField& field) {
  SignMagnitude out;
  out.tau.reserve(field.values.size());
  out.f.reserve(field.values.size());
  for (double v : field.values) {
    out.tau.push_back(sign_of(v));
    out.f.push_back(std::abs(v));
  }
  return out;
}

}  // namespace z2lab
