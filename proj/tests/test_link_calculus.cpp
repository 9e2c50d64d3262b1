#include <gtest/gtest.h>

#include "hypcoh/link_calculus.hpp"

using namespace hypcoh;

namespace {

const Space P1 = Space::proj(1);

Link sj(int k) { return Link::self_join(P1, k); }

// The piece A of the two-line configuration: the cone over the link of one line,
// then the line's link moving along the other line, then type-8 links.
Link two_line_piece() {
  return Link::stratified({
      {Space::point(), Twist::trivial, fiber_compact(Link::cone(sj(3)))},
      {Space::affine(1), Twist::trivial, fiber_open_cone(sj(3))},
      {Space::affine(1), Twist::trivial, fiber_open_cone(Link::susp(sj(3)))},
  });
}

// Points of two crossing lines, mixed pairs, and triples through the crossing.
Link two_line_intersection() {
  const Link cross = Link::mv_union({Link::space(P1), Link::space(P1)}, {{{0, 1}, Link::space(Space::point())}});
  return Link::stratified({
      {Space::point(), Twist::trivial, fiber_compact(Link::cone(cross))},
      {Space::product({Space::affine(1), Space::affine(1)}), Twist::trivial, fiber_partial_simplex(2, 2)},
  });
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::inconsistent;
}

void expect_chi_agrees(const Link& l) {
  EXPECT_EQ(euler_cs(l), 1 + eval_link(l).euler_characteristic()) << l.to_string();
}

}  // namespace

TEST(LinkCalculus, BasicShapes) {
  EXPECT_TRUE(eval_link(Link::cone(Link::space(Space::proj(2)))).is_zero());
  EXPECT_TRUE(eval_link(Link::susp(sj(3))).is_zero());
  EXPECT_TRUE(eval_link(sj(2)).is_zero());
  EXPECT_EQ(eval_link(Link::space(Space::proj(2))), (GradedModule{{2, 1}, {4, 1}}));
  EXPECT_EQ(eval_link(Link::susp(Link::space(P1))), (GradedModule{{3, 1}}));
  // S^2 * S^2 = S^5
  EXPECT_EQ(eval_link(Link::join(Link::space(P1), Link::space(P1))), (GradedModule{{5, 1}}));
  EXPECT_TRUE(eval_link(Link::simplex(4)).is_zero());
}

TEST(LinkCalculus, SuspensionShiftsByOne) {
  const std::vector<Link> samples = {Link::space(P1), Link::space(Space::proj(3)), Link::space(Space::grassmann(2, 4)),
                                     Link::known(GradedModule{{7, 1}}, "sphere"), sj(1)};
  for (const auto& l : samples) {
    const auto once = eval_link(Link::susp(l));
    const auto twice = eval_link(Link::susp(Link::susp(l)));
    EXPECT_EQ(twice, eval_link(l).shifted(2));
    EXPECT_EQ(once.rank(0), 0);
    expect_chi_agrees(Link::susp(l));
  }
  // S^0 = two points
  const Link s0 = Link::mv_union({Link::space(Space::point()), Link::space(Space::point())}, {});
  EXPECT_EQ(eval_link(s0), (GradedModule{{0, 1}}));
  EXPECT_EQ(eval_link(Link::susp(s0)).rank(0), 0);
}

TEST(SelfJoinPage, SmallCases) {
  const auto k2 = self_join_page(2);
  ASSERT_EQ(k2.cells.size(), 3u);
  EXPECT_EQ(k2.cells[0].p, 1);
  EXPECT_EQ(k2.cells[0].q, -1);
  EXPECT_EQ(k2.cells[1].p, 1);
  EXPECT_EQ(k2.cells[1].q, 1);
  EXPECT_EQ(k2.cells[2].p, 2);
  EXPECT_EQ(k2.cells[2].q, 1);
  ASSERT_EQ(k2.differentials.size(), 1u);
  EXPECT_TRUE(k2.reduced.is_zero());

  EXPECT_EQ(self_join_page(1).reduced, (GradedModule{{2, 1}}));
  EXPECT_TRUE(self_join_page(5).reduced.is_zero());
}

TEST(SelfJoinPage, AcyclicWithUnitEulerCharacteristic) {
  for (int k = 2; k <= 6; ++k) {
    EXPECT_EQ(self_join_page(k).reduced.total_rank(), 0);
    EXPECT_EQ(euler_cs(sj(k)), 1);
  }
  EXPECT_EQ(self_join_page(1).reduced.total_rank(), 1);
  EXPECT_EQ(euler_cs(sj(1)), 2);
}

TEST(BmOpenCone, Shift) {
  EXPECT_EQ(bm_open_cone(GradedModule{{0, 1}}), (GradedModule{{1, 1}}));
  EXPECT_EQ(bm_open_cone(eval_link(Link::space(P1))), (GradedModule{{3, 1}}));
  EXPECT_EQ(bm_open_cone(GradedModule{{7, 1}}), (GradedModule{{8, 1}}));
  const GradedModule g{{0, 2}, {3, 1}, {5, 4}};
  EXPECT_EQ(bm_open_cone(g).total_rank(), g.total_rank());
}

TEST(StratifiedLink, TwoLinesPieceAndIntersectionAreAcyclic) {
  EXPECT_TRUE(eval_link(two_line_piece()).is_zero());
  EXPECT_TRUE(eval_link(two_line_intersection()).is_zero());
  const Link u = Link::mv_union({two_line_piece(), two_line_piece()}, {{{0, 1}, two_line_intersection()}});
  EXPECT_TRUE(eval_link(u).is_zero());
  expect_chi_agrees(two_line_piece());
  expect_chi_agrees(two_line_intersection());
  expect_chi_agrees(u);
}

TEST(StratifiedLink, PlaneFiltrationIsAcyclic) {
  // cone over a self-join pair glued at a point, then pairs of points moving
  const Link l6 = Link::stratified({
      {Space::point(), Twist::trivial,
       fiber_compact(Link::mv_union({Link::cone(sj(2)), Link::cone(sj(2))}, {{{0, 1}, Link::space(Space::point())}}))},
      {Space::product({Space::affine(1), Space::affine(1)}), Twist::trivial, fiber_partial_simplex(2, 2)},
  });
  const Link n2 = Link::known(GradedModule{}, "acyclic bottom of the plane filtration");
  const Link plane = Link::stratified({
      {Space::point(), Twist::trivial, fiber_compact(n2)},
      {Space::known("N2", GradedModule{{5, 1}, {10, 1}}, 10, "nonsingular conics"), Twist::trivial,
       fiber_open_cone(sj(3))},
      {Space::config(Space::proj(2), 2), Twist::trivial, fiber_open_cone(l6)},
  });
  EXPECT_TRUE(eval_link(l6).is_zero());
  EXPECT_TRUE(eval_link(plane).is_zero());
  expect_chi_agrees(l6);
  expect_chi_agrees(plane);
}

TEST(StratifiedLink, SingleStratum) {
  const Link l = Link::stratified({{P1, Twist::trivial, fiber_module(GradedModule{{0, 1}})}});
  EXPECT_EQ(stratified_link_homology(l), (GradedModule{{2, 1}}));
  expect_chi_agrees(l);
}

TEST(StratifiedLink, UndeterminedBoundaryIsRefused) {
  // point closed, then an open 1-disc over a point: the boundary map 1 -> 0 is unknown
  const Link l = Link::stratified({{Space::point(), Twist::trivial, fiber_module(GradedModule{{0, 1}})},
                                   {Space::point(), Twist::trivial, fiber_module(GradedModule{{1, 1}})}});
  EXPECT_EQ(kind_of([&] { eval_link(l); }), ErrorKind::ambiguous_assembly);
  std::vector<LinkStratum> five(5, {Space::point(), Twist::trivial, fiber_module(GradedModule{})});
  EXPECT_EQ(kind_of([&] { eval_link(Link::stratified(five)); }), ErrorKind::ambiguous_assembly);
}

TEST(MVUnion, NerveAssembly) {
  // three contractible arcs glued pairwise at points, no triple point: a circle
  const Link pt = Link::space(Space::point());
  const Link circle = Link::mv_union({Link::simplex(2), Link::simplex(2), Link::simplex(2)},
                                     {{{0, 1}, pt}, {{1, 2}, pt}, {{0, 2}, pt}});
  EXPECT_EQ(eval_link(circle), (GradedModule{{1, 1}}));
  expect_chi_agrees(circle);
  // two spheres glued at a point
  const Link wedge = Link::mv_union({Link::space(P1), Link::space(P1)}, {{{0, 1}, pt}});
  EXPECT_EQ(eval_link(wedge), (GradedModule{{2, 2}}));
  // all acyclic with every intersection: contractible
  const Link full = Link::mv_union({pt, pt, pt}, {{{0, 1}, pt}, {{1, 2}, pt}, {{0, 2}, pt}, {{0, 1, 2}, pt}});
  EXPECT_TRUE(eval_link(full).is_zero());
}

TEST(MVUnion, Refusals) {
  const Link s0 = Link::mv_union({Link::space(Space::point()), Link::space(Space::point())}, {});
  // two pieces meeting in two points: row 0 is not the nerve
  EXPECT_EQ(kind_of([&] { eval_link(Link::mv_union({Link::simplex(2), Link::simplex(2)}, {{{0, 1}, s0}})); }),
            ErrorKind::ambiguous_assembly);
  // spheres glued along a sphere: d1 in row 2 undetermined
  EXPECT_EQ(kind_of([&] {
              eval_link(Link::mv_union({Link::space(P1), Link::space(P1)}, {{{0, 1}, Link::space(P1)}}));
            }),
            ErrorKind::ambiguous_assembly);
  EXPECT_EQ(kind_of([&] {
              Link::mv_union({s0, s0, s0}, {{{0, 1, 2}, s0}});
            }),
            ErrorKind::invalid_expression);
}

TEST(LinkCalculus, EulerCharacteristics) {
  for (int n = 0; n <= 4; ++n) EXPECT_EQ(euler_cs(Link::space(Space::proj(n))), n + 1);
  EXPECT_EQ(euler_cs(Link::cone(Link::space(Space::proj(3)))), 1);
  for (const auto& l : {Link::join(sj(1), Link::space(Space::proj(2))), Link::susp(sj(4)),
                        Link::join(sj(3), Link::space(P1)), Link::known(GradedModule{{7, 1}}, "sphere")})
    expect_chi_agrees(l);
}

TEST(LinkCalculus, Errors) {
  EXPECT_EQ(kind_of([] { Link::self_join(Space::proj(2), 2); }), ErrorKind::invalid_expression);
  EXPECT_EQ(kind_of([] { eval_link(Link::space(Space::affine(1))); }), ErrorKind::invalid_expression);
  EXPECT_EQ(kind_of([] { Link::known(GradedModule{}, ""); }), ErrorKind::invalid_expression);
}
