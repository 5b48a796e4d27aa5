#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace z2lab {

enum class Boundary { periodic, open };

std::string_view to_string(Boundary b);
Boundary boundary_from_string(std::string_view s);

class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Link from `site` to `site + e_dir`.
struct LinkRef {
  std::size_t site = 0;
  int dir = 0;
  friend bool operator==(const LinkRef&, const LinkRef&) = default;
  friend auto operator<=>(const LinkRef&, const LinkRef&) = default;
};

/// Elementary square with lower corner `site` spanning directions mu < nu.
struct PlaquetteRef {
  std::size_t site = 0;
  int mu = 0;
  int nu = 1;
  friend bool operator==(const PlaquetteRef&, const PlaquetteRef&) = default;
  friend auto operator<=>(const PlaquetteRef&, const PlaquetteRef&) = default;
};

/// Non-winding rectangle in plane (mu, nu): n_mu links along mu, n_nu along nu.
struct RectLoop {
  int mu = 0;
  int nu = 1;
  std::size_t corner = 0;
  int n_mu = 1;
  int n_nu = 1;
};

/// For a link l inside plaquette p, the three other links of p.
struct Staple {
  std::uint32_t plaquette;
  std::array<std::uint32_t, 3> others;
};

/// Immutable d-dimensional hypercubic lattice with dense site, link and
/// plaquette numbering. Sites are numbered lexicographically with x^0
/// running fastest; coordinates are 0-based.
///
/// Links and plaquettes are numbered densely over the valid ones only, so
/// that field arrays never carry dead slots on open lattices.
class LatticeGeometry {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// Gauge lattice: requires d >= 2.
  LatticeGeometry(std::vector<int> extents, Boundary boundary);

  /// Site lattice for spin models, which may be one-dimensional.
  static LatticeGeometry spin_lattice(std::vector<int> extents,
                                      Boundary boundary);

  int dim() const { return static_cast<int>(extents_.size()); }
  const std::vector<int>& extents() const { return extents_; }
  int extent(int mu) const { return extents_[static_cast<std::size_t>(mu)]; }
  Boundary boundary() const { return boundary_; }
  bool periodic() const { return boundary_ == Boundary::periodic; }

  std::size_t site_count() const { return site_count_; }
  std::size_t link_count() const { return link_refs_.size(); }
  std::size_t plaquette_count() const { return plaquette_refs_.size(); }

  /// Non-fatal construction diagnostics (e.g. periodic extent 2).
  const std::vector<std::string>& warnings() const { return warnings_; }

  std::vector<int> coords(std::size_t site) const;
  std::size_t site_index(std::span<const int> x) const;
  int coord(std::size_t site, int mu) const;

  /// Neighbour site `site + e_mu` (forward) or `site - e_mu`; npos if the
  /// step leaves an open lattice.
  std::size_t forward(std::size_t site, int mu) const {
    return fwd_[site * static_cast<std::size_t>(dim()) +
                static_cast<std::size_t>(mu)];
  }
  std::size_t backward(std::size_t site, int mu) const {
    return bwd_[site * static_cast<std::size_t>(dim()) +
                static_cast<std::size_t>(mu)];
  }
  /// Site reached by `steps` forward moves along mu, or npos.
  std::size_t shift(std::size_t site, int mu, int steps) const;

  bool valid(const LinkRef& l) const;
  bool valid(const PlaquetteRef& p) const;
  std::size_t link_index(const LinkRef& l) const;
  LinkRef link_ref(std::size_t index) const { return link_refs_.at(index); }
  std::size_t plaquette_index(const PlaquetteRef& p) const;
  PlaquetteRef plaquette_ref(std::size_t index) const {
    return plaquette_refs_.at(index);
  }

  /// Dense indices of the four links bounding plaquette `p`, in the order
  /// (x, mu), (x + e_mu, nu), (x + e_nu, mu), (x, nu).
  std::span<const std::uint32_t> plaquette_link_indices(std::size_t p) const {
    return {plaquette_links_.data() + 4 * p, 4};
  }
  std::array<LinkRef, 4> plaquette_links(const PlaquetteRef& p) const;

  /// Plaquettes containing link `l`: 2(d-1) on periodic lattices, fewer at
  /// open edges.
  std::vector<PlaquetteRef> staple_plaquettes(const LinkRef& l) const;
  std::span<const Staple> staples(std::size_t link) const {
    return {staples_.data() + staple_offsets_[link],
            staple_offsets_[link + 1] - staple_offsets_[link]};
  }

  /// True for plaquettes in a plane (j, k) with j, k >= 1.
  bool spatial_plaquette(std::size_t p) const { return plaquette_refs_[p].mu >= 1; }

  /// Links of the rectangle perimeter, ordered along the contour starting at
  /// the corner and moving along mu first.
  std::vector<LinkRef> rect_loop_links(const RectLoop& loop) const;
  std::vector<std::size_t> rect_loop_indices(const RectLoop& loop) const;
  /// Whether the rectangle is non-winding and (for open lattices) fits.
  bool loop_fits(const RectLoop& loop) const;

  friend bool operator==(const LatticeGeometry& a, const LatticeGeometry& b) {
    return a.extents_ == b.extents_ && a.boundary_ == b.boundary_;
  }

 private:
  LatticeGeometry(std::vector<int> extents, Boundary boundary, int min_dim);

  std::vector<int> extents_;
  Boundary boundary_;
  std::size_t site_count_ = 0;
  std::vector<std::size_t> strides_;
  std::vector<std::size_t> fwd_;
  std::vector<std::size_t> bwd_;
  std::vector<std::size_t> link_slot_;  // site * d + dir -> dense index or npos
  std::vector<LinkRef> link_refs_;
  std::vector<std::size_t> plaquette_slot_;  // site * npairs + pair -> dense
  std::vector<PlaquetteRef> plaquette_refs_;
  std::vector<std::uint32_t> plaquette_links_;
  std::vector<std::size_t> staple_offsets_;
  std::vector<Staple> staples_;
  std::vector<std::string> warnings_;

  std::size_t pair_index(int mu, int nu) const;
};

using GeometryPtr = std::shared_ptr<const LatticeGeometry>;

GeometryPtr build_geometry(std::vector<int> extents, Boundary boundary);

/// One real value per link. Owned by a single writer.
struct GaugeField {
  GeometryPtr geometry;
  std::vector<double> values;

  GaugeField() = default;
  explicit GaugeField(GeometryPtr g, double fill = 0.0)
      : geometry(std::move(g)), values(geometry->link_count(), fill) {}

  double& operator[](std::size_t l) { return values[l]; }
  double operator[](std::size_t l) const { return values[l]; }
  double& at(const LinkRef& l) { return values[geometry->link_index(l)]; }
  double at(const LinkRef& l) const { return values[geometry->link_index(l)]; }
};

/// Site-wise sign flip phi(l) -> sigma(x) phi(l) sigma(x + e_mu).
/// `sigma` holds one entry (+1 or -1) per site.
GaugeField apply_gauge_transform(const GaugeField& field,
                                 std::span<const int> sigma);

}  // namespace z2lab
