#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "z2lab/lattice.hpp"

using namespace z2lab;

TEST(Lattice, CountsPeriodic) {
  const LatticeGeometry g({4, 4, 4}, Boundary::periodic);
  EXPECT_EQ(g.site_count(), 64u);
  EXPECT_EQ(g.link_count(), 192u);
  EXPECT_EQ(g.plaquette_count(), 192u);
  EXPECT_TRUE(g.warnings().empty());
}

TEST(Lattice, CountsOpen) {
  const LatticeGeometry g({3, 4}, Boundary::open);
  EXPECT_EQ(g.link_count(), 2u * 4u + 3u * 3u);
  EXPECT_EQ(g.plaquette_count(), 6u);
  const LatticeGeometry cube({2, 2, 2}, Boundary::open);
  EXPECT_EQ(cube.link_count(), 12u);
  EXPECT_EQ(cube.plaquette_count(), 6u);
}

TEST(Lattice, RejectsBadGeometry) {
  EXPECT_THROW(LatticeGeometry({4}, Boundary::periodic), GeometryError);
  EXPECT_THROW(LatticeGeometry({4, 1}, Boundary::open), GeometryError);
  EXPECT_NO_THROW(LatticeGeometry::spin_lattice({4}, Boundary::open));
  const LatticeGeometry g({2, 4}, Boundary::periodic);
  EXPECT_EQ(g.warnings().size(), 1u);
}

TEST(Lattice, NeighboursAndCoordinates) {
  const LatticeGeometry g({3, 4, 5}, Boundary::periodic);
  for (std::size_t s = 0; s < g.site_count(); ++s) {
    const auto x = g.coords(s);
    EXPECT_EQ(g.site_index(x), s);
    for (int mu = 0; mu < 3; ++mu) {
      EXPECT_EQ(g.backward(g.forward(s, mu), mu), s);
      EXPECT_EQ(g.shift(s, mu, g.extent(mu)), s);
    }
  }
  EXPECT_EQ(g.site_index(std::vector<int>{1, 0, 0}), 1u);  // x^0 fastest
  const LatticeGeometry o({3, 3}, Boundary::open);
  EXPECT_EQ(o.forward(o.site_index(std::vector<int>{2, 0}), 0), LatticeGeometry::npos);
  EXPECT_EQ(o.backward(0, 1), LatticeGeometry::npos);
}

TEST(Lattice, DenseLinkIndexRoundTrip) {
  for (Boundary b : {Boundary::periodic, Boundary::open}) {
    const LatticeGeometry g({3, 4, 3}, b);
    std::set<std::size_t> seen;
    for (std::size_t l = 0; l < g.link_count(); ++l) {
      EXPECT_EQ(g.link_index(g.link_ref(l)), l);
      seen.insert(l);
    }
    for (std::size_t p = 0; p < g.plaquette_count(); ++p) {
      EXPECT_EQ(g.plaquette_index(g.plaquette_ref(p)), p);
    }
  }
}

// Every plaquette is a closed path: each corner is touched by exactly two
// of its links.
TEST(Lattice, PlaquettesAreClosed) {
  for (Boundary b : {Boundary::periodic, Boundary::open}) {
    const LatticeGeometry g({3, 3, 4}, b);
    for (std::size_t p = 0; p < g.plaquette_count(); ++p) {
      const auto links = g.plaquette_link_indices(p);
      std::map<std::size_t, int> touches;
      std::set<std::size_t> distinct;
      for (auto l : links) {
        const LinkRef r = g.link_ref(l);
        ++touches[r.site];
        ++touches[g.forward(r.site, r.dir)];
        distinct.insert(l);
      }
      EXPECT_EQ(distinct.size(), 4u);
      EXPECT_EQ(touches.size(), 4u);
      for (const auto& [s, n] : touches) EXPECT_EQ(n, 2);
      const PlaquetteRef ref = g.plaquette_ref(p);
      EXPECT_EQ(g.spatial_plaquette(p), ref.mu >= 1);
      EXPECT_EQ(g.link_ref(links[0]), (LinkRef{ref.site, ref.mu}));
      EXPECT_EQ(g.link_ref(links[3]), (LinkRef{ref.site, ref.nu}));
    }
  }
}

TEST(Lattice, StaplesCoverEveryPlaquetteOfALink) {
  const LatticeGeometry g({4, 4, 4}, Boundary::periodic);
  std::vector<int> count(g.plaquette_count(), 0);
  for (std::size_t l = 0; l < g.link_count(); ++l) {
    const auto st = g.staples(l);
    EXPECT_EQ(st.size(), 4u);  // 2 (d - 1)
    for (const Staple& s : st) {
      ++count[s.plaquette];
      std::vector<std::uint32_t> all(s.others.begin(), s.others.end());
      all.push_back(static_cast<std::uint32_t>(l));
      std::sort(all.begin(), all.end());
      const auto pl = g.plaquette_link_indices(s.plaquette);
      std::vector<std::uint32_t> expect(pl.begin(), pl.end());
      std::sort(expect.begin(), expect.end());
      EXPECT_EQ(all, expect);
    }
  }
  for (int c : count) EXPECT_EQ(c, 4);
  const LatticeGeometry o({2, 2}, Boundary::open);
  for (std::size_t l = 0; l < o.link_count(); ++l) EXPECT_EQ(o.staples(l).size(), 1u);
}

TEST(Lattice, RectangleContour) {
  const LatticeGeometry g({5, 6, 4}, Boundary::periodic);
  const RectLoop loop{0, 2, 7, 3, 2};
  ASSERT_TRUE(g.loop_fits(loop));
  const auto links = g.rect_loop_links(loop);
  ASSERT_EQ(links.size(), 10u);
  std::map<std::size_t, int> touches;
  for (const LinkRef& r : links) {
    ++touches[r.site];
    ++touches[g.forward(r.site, r.dir)];
  }
  EXPECT_EQ(touches.size(), 10u);
  for (const auto& [s, n] : touches) EXPECT_EQ(n, 2);
  EXPECT_EQ(links.front(), (LinkRef{7, 0}));

  EXPECT_FALSE(g.loop_fits(RectLoop{0, 1, 0, 5, 1}));  // winds around x^0
  const LatticeGeometry o({3, 3}, Boundary::open);
  EXPECT_TRUE(o.loop_fits(RectLoop{0, 1, 0, 2, 2}));
  EXPECT_FALSE(o.loop_fits(RectLoop{0, 1, 1, 2, 2}));
}

TEST(Lattice, GaugeTransformIsAnInvolution) {
  auto g = build_geometry({3, 3}, Boundary::periodic);
  GaugeField f(g);
  for (std::size_t l = 0; l < f.values.size(); ++l) f.values[l] = 0.1 * static_cast<double>(l + 1);
  std::vector<int> sigma(g->site_count(), 1);
  sigma[4] = -1;
  const GaugeField h = apply_gauge_transform(f, sigma);
  for (std::size_t l = 0; l < f.values.size(); ++l) {
    const LinkRef r = g->link_ref(l);
    const bool flipped = (r.site == 4) != (g->forward(r.site, r.dir) == 4);
    EXPECT_EQ(h.values[l], flipped ? -f.values[l] : f.values[l]);
  }
  EXPECT_EQ(apply_gauge_transform(h, sigma).values, f.values);
  EXPECT_THROW(apply_gauge_transform(f, std::vector<int>(3, 1)), std::invalid_argument);
}
