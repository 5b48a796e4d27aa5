#include "z2lab/lattice.hpp"

#include <algorithm>
#include <sstream>

namespace z2lab {

std::string_view to_string(Boundary b) {
  return b == Boundary::periodic ? "periodic" : "open";
}

Boundary boundary_from_string(std::string_view s) {
  if (s == "periodic") return Boundary::periodic;
  if (s == "open") return Boundary::open;
  throw GeometryError("unknown boundary '" + std::string(s) +
                      "' (expected periodic or open)");
}

LatticeGeometry::LatticeGeometry(std::vector<int> extents, Boundary boundary)
    : LatticeGeometry(std::move(extents), boundary, 2) {}

LatticeGeometry LatticeGeometry::spin_lattice(std::vector<int> extents,
                                              Boundary boundary) {
  return LatticeGeometry(std::move(extents), boundary, 1);
}

LatticeGeometry::LatticeGeometry(std::vector<int> extents, Boundary boundary,
                                 int min_dim)
    : extents_(std::move(extents)), boundary_(boundary) {
  const int d = dim();
  if (d < min_dim) {
    throw GeometryError("lattice dimension must be >= " +
                        std::to_string(min_dim) + ", got " + std::to_string(d));
  }
  for (int mu = 0; mu < d; ++mu) {
    if (extent(mu) < 2) {
      throw GeometryError("extent in direction " + std::to_string(mu) +
                          " must be >= 2, got " + std::to_string(extent(mu)));
    }
    if (periodic() && extent(mu) == 2) {
      warnings_.push_back("periodic extent 2 in direction " +
                          std::to_string(mu) +
                          ": forward and backward neighbours coincide");
    }
  }

  const auto ud = static_cast<std::size_t>(d);
  strides_.resize(ud);
  site_count_ = 1;
  for (std::size_t mu = 0; mu < ud; ++mu) {
    strides_[mu] = site_count_;
    site_count_ *= static_cast<std::size_t>(extents_[mu]);
  }

  fwd_.assign(site_count_ * ud, npos);
  bwd_.assign(site_count_ * ud, npos);
  for (std::size_t s = 0; s < site_count_; ++s) {
    for (int mu = 0; mu < d; ++mu) {
      const int x = coord(s, mu);
      const int L = extent(mu);
      const auto umu = static_cast<std::size_t>(mu);
      if (x + 1 < L) {
        fwd_[s * ud + umu] = s + strides_[umu];
      } else if (periodic()) {
        fwd_[s * ud + umu] = s - static_cast<std::size_t>(L - 1) * strides_[umu];
      }
      if (x > 0) {
        bwd_[s * ud + umu] = s - strides_[umu];
      } else if (periodic()) {
        bwd_[s * ud + umu] = s + static_cast<std::size_t>(L - 1) * strides_[umu];
      }
    }
  }

  link_slot_.assign(site_count_ * ud, npos);
  for (std::size_t s = 0; s < site_count_; ++s) {
    for (int mu = 0; mu < d; ++mu) {
      if (forward(s, mu) == npos) continue;
      link_slot_[s * ud + static_cast<std::size_t>(mu)] = link_refs_.size();
      link_refs_.push_back({s, mu});
    }
  }

  const std::size_t npairs = ud * (ud - 1) / 2;
  plaquette_slot_.assign(site_count_ * npairs, npos);
  for (std::size_t s = 0; s < site_count_; ++s) {
    for (int mu = 0; mu < d; ++mu) {
      for (int nu = mu + 1; nu < d; ++nu) {
        const std::size_t xm = forward(s, mu);
        const std::size_t xn = forward(s, nu);
        if (xm == npos || xn == npos) continue;
        plaquette_slot_[s * npairs + pair_index(mu, nu)] =
            plaquette_refs_.size();
        plaquette_refs_.push_back({s, mu, nu});
        for (const LinkRef& l : std::array<LinkRef, 4>{
                 LinkRef{s, mu}, LinkRef{xm, nu}, LinkRef{xn, mu},
                 LinkRef{s, nu}}) {
          plaquette_links_.push_back(
              static_cast<std::uint32_t>(link_index(l)));
        }
      }
    }
  }

  // Incidence lists in CSR form.
  std::vector<std::size_t> counts(link_refs_.size() + 1, 0);
  for (std::uint32_t l : plaquette_links_) ++counts[l + 1];
  for (std::size_t i = 1; i < counts.size(); ++i) counts[i] += counts[i - 1];
  staple_offsets_ = counts;
  staples_.resize(plaquette_links_.size());
  std::vector<std::size_t> fill(staple_offsets_.begin(),
                                staple_offsets_.end() - 1);
  for (std::size_t p = 0; p < plaquette_refs_.size(); ++p) {
    const auto links = plaquette_link_indices(p);
    for (int i = 0; i < 4; ++i) {
      Staple st{static_cast<std::uint32_t>(p), {}};
      int k = 0;
      for (int j = 0; j < 4; ++j) {
        if (j != i) st.others[static_cast<std::size_t>(k++)] = links[static_cast<std::size_t>(j)];
      }
      staples_[fill[links[static_cast<std::size_t>(i)]]++] = st;
    }
  }
}

std::size_t LatticeGeometry::pair_index(int mu, int nu) const {
  // Row-major enumeration of pairs mu < nu.
  const int d = dim();
  return static_cast<std::size_t>(mu * (2 * d - mu - 1) / 2 + (nu - mu - 1));
}

int LatticeGeometry::coord(std::size_t site, int mu) const {
  const auto umu = static_cast<std::size_t>(mu);
  return static_cast<int>((site / strides_[umu]) %
                          static_cast<std::size_t>(extents_[umu]));
}

std::vector<int> LatticeGeometry::coords(std::size_t site) const {
  if (site >= site_count_) throw GeometryError("site index out of range");
  std::vector<int> x(extents_.size());
  for (int mu = 0; mu < dim(); ++mu) x[static_cast<std::size_t>(mu)] = coord(site, mu);
  return x;
}

std::size_t LatticeGeometry::site_index(std::span<const int> x) const {
  if (x.size() != extents_.size()) {
    throw GeometryError("coordinate rank does not match lattice dimension");
  }
  std::size_t s = 0;
  for (std::size_t mu = 0; mu < x.size(); ++mu) {
    if (x[mu] < 0 || x[mu] >= extents_[mu]) {
      throw GeometryError("coordinate out of range in direction " +
                          std::to_string(mu));
    }
    s += static_cast<std::size_t>(x[mu]) * strides_[mu];
  }
  return s;
}

std::size_t LatticeGeometry::shift(std::size_t site, int mu, int steps) const {
  std::size_t s = site;
  for (int i = 0; i < steps && s != npos; ++i) s = forward(s, mu);
  return s;
}

bool LatticeGeometry::valid(const LinkRef& l) const {
  return l.site < site_count_ && l.dir >= 0 && l.dir < dim() &&
         forward(l.site, l.dir) != npos;
}

bool LatticeGeometry::valid(const PlaquetteRef& p) const {
  return p.site < site_count_ && p.mu >= 0 && p.mu < p.nu && p.nu < dim() &&
         forward(p.site, p.mu) != npos && forward(p.site, p.nu) != npos;
}

std::size_t LatticeGeometry::link_index(const LinkRef& l) const {
  if (!valid(l)) {
    throw GeometryError("invalid link (site " + std::to_string(l.site) +
                        ", dir " + std::to_string(l.dir) + ")");
  }
  return link_slot_[l.site * static_cast<std::size_t>(dim()) +
                    static_cast<std::size_t>(l.dir)];
}

std::size_t LatticeGeometry::plaquette_index(const PlaquetteRef& p) const {
  if (!valid(p)) {
    throw GeometryError("invalid plaquette (site " + std::to_string(p.site) +
                        ", plane " + std::to_string(p.mu) + "," +
                        std::to_string(p.nu) + ")");
  }
  const auto d = static_cast<std::size_t>(dim());
  return plaquette_slot_[p.site * (d * (d - 1) / 2) + pair_index(p.mu, p.nu)];
}

std::array<LinkRef, 4> LatticeGeometry::plaquette_links(
    const PlaquetteRef& p) const {
  const auto idx = plaquette_link_indices(plaquette_index(p));
  return {link_refs_[idx[0]], link_refs_[idx[1]], link_refs_[idx[2]],
          link_refs_[idx[3]]};
}

std::vector<PlaquetteRef> LatticeGeometry::staple_plaquettes(
    const LinkRef& l) const {
  std::vector<PlaquetteRef> out;
  for (const Staple& st : staples(link_index(l))) {
    out.push_back(plaquette_refs_[st.plaquette]);
  }
  return out;
}

bool LatticeGeometry::loop_fits(const RectLoop& loop) const {
  if (loop.mu < 0 || loop.nu < 0 || loop.mu >= dim() || loop.nu >= dim() ||
      loop.mu == loop.nu || loop.corner >= site_count_) {
    return false;
  }
  if (loop.n_mu < 1 || loop.n_nu < 1 || loop.n_mu >= extent(loop.mu) ||
      loop.n_nu >= extent(loop.nu)) {
    return false;
  }
  if (!periodic()) {
    if (coord(loop.corner, loop.mu) + loop.n_mu > extent(loop.mu) - 1) return false;
    if (coord(loop.corner, loop.nu) + loop.n_nu > extent(loop.nu) - 1) return false;
  }
  return true;
}

std::vector<LinkRef> LatticeGeometry::rect_loop_links(
    const RectLoop& loop) const {
  if (!loop_fits(loop)) {
    std::ostringstream msg;
    msg << "rectangle " << loop.n_mu << "x" << loop.n_nu << " in plane ("
        << loop.mu << "," << loop.nu << ") at site " << loop.corner
        << " winds or leaves the lattice";
    throw GeometryError(msg.str());
  }
  std::vector<LinkRef> out;
  out.reserve(static_cast<std::size_t>(2 * (loop.n_mu + loop.n_nu)));
  std::size_t s = loop.corner;
  for (int i = 0; i < loop.n_mu; ++i) {
    out.push_back({s, loop.mu});
    s = forward(s, loop.mu);
  }
  for (int j = 0; j < loop.n_nu; ++j) {
    out.push_back({s, loop.nu});
    s = forward(s, loop.nu);
  }
  for (int i = 0; i < loop.n_mu; ++i) {
    s = backward(s, loop.mu);
    out.push_back({s, loop.mu});
  }
  for (int j = 0; j < loop.n_nu; ++j) {
    s = backward(s, loop.nu);
    out.push_back({s, loop.nu});
  }
  return out;
}

std::vector<std::size_t> LatticeGeometry::rect_loop_indices(
    const RectLoop& loop) const {
  std::vector<std::size_t> out;
  for (const LinkRef& l : rect_loop_links(loop)) out.push_back(link_index(l));
  return out;
}

GeometryPtr build_geometry(std::vector<int> extents, Boundary boundary) {
  return std::make_shared<const LatticeGeometry>(std::move(extents), boundary);
}

GaugeField apply_gauge_transform(const GaugeField& field,
                                 std::span<const int> sigma) {
  const LatticeGeometry& g = *field.geometry;
  if (sigma.size() != g.site_count()) {
    throw GeometryError("gauge transform needs one sign per site");
  }
  GaugeField out = field;
  for (std::size_t l = 0; l < g.link_count(); ++l) {
    const LinkRef ref = g.link_ref(l);
    const int flip = sigma[ref.site] * sigma[g.forward(ref.site, ref.dir)];
    if (flip < 0) out.values[l] = -out.values[l];
  }
  return out;
}

}  // namespace z2lab
