#include <gtest/gtest.h>

#include "qshape/quiver.hpp"
#include "qshape/setup.hpp"

using namespace qshape;

namespace {

using Cat = KCategory<Rationals>;
Rationals QQ;

std::size_t at(const Cat& c, const std::string& l) {
  auto i = c.find(l);
  if (!i) throw std::out_of_range("no object " + l);
  return *i;
}
std::size_t at(const Cat& c, int d) { return at(c, std::to_string(d)); }

std::map<std::string, std::string> serre_labels(const Cat& c, const SerreData<Rationals>& sd) {
  std::map<std::string, std::string> m;
  for (auto [p, s] : sd.S) m[c.label(p)] = c.label(s);
  return m;
}

template <class F>
void expect_associative(const KCategory<F>& c) {
  const auto n = c.size();
  const auto& f = c.field();
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t s = 0; s < n; ++s) {
          if (!c.dim(p, q) || !c.dim(q, r) || !c.dim(r, s)) continue;
          for (std::size_t i = 0; i < c.dim(p, q); ++i)
            for (std::size_t j = 0; j < c.dim(q, r); ++j)
              for (std::size_t k = 0; k < c.dim(r, s); ++k) {
                auto a = unit_vec(f, c.dim(p, q), i), b = unit_vec(f, c.dim(q, r), j), h = unit_vec(f, c.dim(r, s), k);
                auto left = c.compose(p, r, s, h, c.compose(p, q, r, b, a));
                auto right = c.compose(p, q, s, c.compose(q, r, s, h, b), a);
                ASSERT_EQ(left, right);
              }
        }
}

}  // namespace

TEST(Build, LinearSquareZero) {
  auto c = build_category(QQ, QuiverSpec::complexes(), -3, 3);
  for (int q = -3; q <= 3; ++q)
    for (int p = -3; p <= 3; ++p) EXPECT_EQ(c->dim(at(*c, q), at(*c, p)), (p == q || p == q - 1) ? 1u : 0u);
}

TEST(Build, NLinear) {
  const int N = 3;
  auto c = build_category(QQ, QuiverSpec::nlinear(N), -4, 4);
  for (int q = -4; q <= 4; ++q)
    for (int p = -4; p <= 4; ++p) EXPECT_EQ(c->dim(at(*c, q), at(*c, p)), (q - N < p && p <= q) ? 1u : 0u);
}

TEST(Build, CyclicSquareZero) {
  auto c = build_category(QQ, QuiverSpec::cyclic(3), 0, 0);
  for (int q = 0; q < 3; ++q) {
    EXPECT_EQ(c->dim(at(*c, q), at(*c, q)), 1u);
    EXPECT_EQ(c->dim(at(*c, q), at(*c, (q + 2) % 3)), 1u);
  }
}

TEST(Build, RejectsInadmissibleRelations) {
  QuiverSpec s;
  s.objects = {"a", "b"};
  s.arrows = {{"x", "a", "b"}};
  s.relations = {Scheme{{1, {"x"}}}};
  s.relations_given = true;
  EXPECT_THROW(build_category(QQ, s), AdmissibilityError);
  QuiverSpec t;
  t.arrows = {{"x", "a", "b"}, {"y", "b", "c"}, {"z", "a", "c"}};
  t.relations = {Scheme{{1, {"x", "y"}}, {-1, {"z"}}}};
  t.relations_given = true;
  EXPECT_THROW(build_category(QQ, t), AdmissibilityError);
}

TEST(Compose, Examples) {
  auto c = build_category(QQ, QuiverSpec::complexes(), -3, 3);
  const auto p2 = at(*c, 2), p1 = at(*c, 1), p0 = at(*c, 0);
  auto f = unit_vec(QQ, c->dim(p2, p1), c->dim(p2, p1) - 1);
  auto g = unit_vec(QQ, c->dim(p1, p0), 0);
  EXPECT_EQ(c->compose(p2, p1, p1, c->identity(p1), f), f);
  EXPECT_TRUE(is_zero_vec<Rationals>(c->compose(p2, p1, p0, g, f)));
  EXPECT_EQ(c->dim(p2, p0), 0u);

  auto n3 = build_category(QQ, QuiverSpec::nlinear(3), -4, 4);
  const auto a2 = at(*n3, 2), a1 = at(*n3, 1), a0 = at(*n3, 0);
  auto h = n3->compose(a2, a1, a0, unit_vec(QQ, 1, 0), unit_vec(QQ, 1, 0));
  EXPECT_EQ(h, unit_vec(QQ, 1, 0));
  EXPECT_EQ(n3->path(a2, a0, 0).size(), 2u);
  EXPECT_THROW(c->compose(p2, p1, p0, g, unit_vec(QQ, 2, 0)), DimensionError);
}

TEST(Compose, Associative) {
  expect_associative(*build_category(QQ, QuiverSpec::nlinear(3), -3, 3));
  expect_associative(*build_category(QQ, QuiverSpec::za3(), 0, 5));
  expect_associative(*build_category(QQ, QuiverSpec::cyclic(3), 0, 0));
  PrimeField f5(5);
  expect_associative(*build_category(f5, QuiverSpec::cyclic(1), 0, 0));
}

TEST(Setup, ComplexesPass) {
  auto c = build_category(QQ, QuiverSpec::complexes(), -3, 3);
  auto r = validate_setup(*c);
  EXPECT_TRUE(r.all_pass());
  EXPECT_EQ(r.nilpotency_degree, 2u);
  ASSERT_TRUE(r.serre_data);
  for (auto [p, s] : r.serre_data->S)
    EXPECT_EQ(std::stoi(c->label(s)), std::stoi(c->label(p)) - 1);
  EXPECT_FALSE(r.has_cycles);
}

TEST(Setup, NComplexesPass) {
  for (int N : {2, 3, 4}) {
    auto c = build_category(QQ, QuiverSpec::nlinear(N), -3 * N, 3 * N);
    auto r = validate_setup(*c);
    EXPECT_TRUE(r.all_pass()) << N;
    EXPECT_EQ(r.nilpotency_degree, static_cast<std::size_t>(N));
    ASSERT_TRUE(r.serre_data);
    EXPECT_FALSE(r.serre_data->S.empty());
    for (auto [p, s] : r.serre_data->S) EXPECT_EQ(std::stoi(c->label(s)), std::stoi(c->label(p)) - N + 1);
  }
}

TEST(Setup, CyclicPass) {
  for (int m : {1, 2, 3}) {
    auto c = build_category(QQ, QuiverSpec::cyclic(m), 0, 0);
    auto r = validate_setup(*c);
    EXPECT_TRUE(r.all_pass()) << m;
    ASSERT_TRUE(r.serre_data);
    EXPECT_EQ(r.serre_data->S.size(), static_cast<std::size_t>(m));
    for (auto [p, s] : r.serre_data->S) EXPECT_EQ(std::stoi(c->label(s)), (std::stoi(c->label(p)) - 1 + m) % m);
    EXPECT_TRUE(r.has_cycles);
  }
}

TEST(Setup, ZA3ReflectionAndShift) {
  auto c = build_category(QQ, QuiverSpec::za3(), -6, 6);
  auto r = validate_setup(*c);
  EXPECT_TRUE(r.all_pass()) << r.serre.witness << r.nilpotence.witness;
  ASSERT_TRUE(r.serre_data);
  EXPECT_FALSE(r.serre_data->S.empty());
  for (auto [p, s] : r.serre_data->S) {
    const auto& cp = c->shape().coords[p];
    const auto& cs = c->shape().coords[s];
    EXPECT_EQ(cs[0], cp[0] + 2);
    EXPECT_EQ(cs[1], -cp[1]);
  }
  EXPECT_FALSE(r.has_cycles);
}

TEST(Setup, PointIsSelfDual) {
  auto c = build_category(QQ, QuiverSpec::point());
  auto r = validate_setup(*c);
  EXPECT_TRUE(r.all_pass());
  ASSERT_TRUE(r.serre_data);
  EXPECT_EQ(r.serre_data->S.at(0), 0u);
  EXPECT_EQ(serre_pairing(*c, *r.serre_data, 0, 0), Matrix<Rationals>::identity(QQ, 1));
  EXPECT_EQ(r.nilpotency_degree, 1u);
}

TEST(Setup, RelationFreeLinearFailsNilpotence) {
  auto c = build_category(QQ, QuiverSpec::linear(), -3, 3);
  auto r = validate_setup(*c);
  EXPECT_FALSE(r.nilpotence.pass);
  EXPECT_FALSE(r.nilpotence.witness.empty());
  EXPECT_FALSE(r.locally_bounded.pass);
}

TEST(Setup, DeletedRelationFailsSerre) {
  auto spec = QuiverSpec::complexes();
  spec.omit = {"0"};
  auto c = build_category(QQ, spec, -5, 5);
  auto r = validate_setup(*c);
  EXPECT_TRUE(r.nilpotence.pass);
  EXPECT_FALSE(r.serre.pass);
  EXPECT_FALSE(r.serre.witness.empty());
}

TEST(Setup, RelationFreeCycleFailsHomFiniteness) {
  QuiverSpec s = QuiverSpec::cyclic(2);
  s.relations_given = true;
  auto c = build_category(QQ, s, 0, 0);
  auto r = validate_setup(*c);
  EXPECT_FALSE(r.hom_finite.pass);
  EXPECT_FALSE(r.nilpotence.pass);
}

TEST(Setup, HintShortCircuits) {
  auto c = build_category(QQ, QuiverSpec::complexes(), -3, 3);
  std::map<std::size_t, std::size_t> wrong;
  for (std::size_t p = 0; p < c->size(); ++p) wrong[p] = p;
  EXPECT_FALSE(validate_setup(*c, &wrong).serre.pass);
  std::map<std::size_t, std::size_t> right;
  for (std::size_t p = 1; p < c->size(); ++p) right[p] = p - 1;
  EXPECT_TRUE(validate_setup(*c, &right).serre.pass);
}

TEST(Setup, DualitySymmetry) {
  std::vector<std::shared_ptr<const Cat>> cats = {
      build_category(QQ, QuiverSpec::complexes(), -3, 3), build_category(QQ, QuiverSpec::nlinear(3), -6, 6),
      build_category(QQ, QuiverSpec::cyclic(3), 0, 0), build_category(QQ, QuiverSpec::za3(), -5, 5),
      build_category(QQ, QuiverSpec::linear(), -3, 3)};
  auto del = QuiverSpec::complexes();
  del.omit = {"0"};
  cats.push_back(build_category(QQ, del, -5, 5));
  for (const auto& c : cats) EXPECT_EQ(validate_setup(*c).all_pass(), validate_setup(*c->opposite()).all_pass());
}

TEST(Serre, NaturalityAndInvertibility) {
  for (auto c : {build_category(QQ, QuiverSpec::za3(), -5, 5), build_category(QQ, QuiverSpec::nlinear(3), -6, 6),
                 build_category(QQ, QuiverSpec::cyclic(3), 0, 0)}) {
    auto r = validate_setup(*c);
    ASSERT_TRUE(r.serre_data);
    const auto& sd = *r.serre_data;
    for (auto [p, sp] : sd.S)
      for (std::size_t q = 0; q < c->size(); ++q)
        if (c->dim(p, q)) EXPECT_TRUE(is_invertible(serre_pairing(*c, sd, p, q)));
    // <S(f) o b', a>_p = <b', a o f>_p' for f: p' -> p.
    for (auto [pp, spp] : sd.S)
      for (auto [p, sp] : sd.S) {
        for (std::size_t fi = 0; fi < c->dim(pp, p); ++fi) {
          auto f = unit_vec(QQ, c->dim(pp, p), fi);
          auto Sf = serre_on_morphism(*c, sd, pp, p, f);
          ASSERT_TRUE(Sf);
          for (std::size_t q = 0; q < c->size(); ++q)
            for (std::size_t bi = 0; bi < c->dim(q, spp); ++bi)
              for (std::size_t ai = 0; ai < c->dim(p, q); ++ai) {
                auto b = unit_vec(QQ, c->dim(q, spp), bi), a = unit_vec(QQ, c->dim(p, q), ai);
                auto lhs = c->compose(p, q, sp, c->compose(q, spp, sp, *Sf, b), a);
                auto rhs = c->compose(pp, q, spp, b, c->compose(pp, p, q, a, f));
                mpq_class l = 0, rr = 0;
                for (std::size_t k = 0; k < lhs.size(); ++k) l += lhs[k] * sd.lambda.at(p)[k];
                for (std::size_t k = 0; k < rhs.size(); ++k) rr += rhs[k] * sd.lambda.at(pp)[k];
                EXPECT_EQ(l, rr);
              }
        }
      }
  }
}

TEST(Cycles, Examples) {
  EXPECT_FALSE(has_cycles(*build_category(QQ, QuiverSpec::complexes(), -3, 3)));
  EXPECT_TRUE(has_cycles(*build_category(QQ, QuiverSpec::cyclic(3), 0, 0)));
  EXPECT_FALSE(has_cycles(*build_category(QQ, QuiverSpec::za3(), -4, 4)));
}

TEST(Window, Stability) {
  for (auto spec : {QuiverSpec::complexes(), QuiverSpec::nlinear(3), QuiverSpec::za3()}) {
    auto small = build_category(QQ, spec, -4, 4);
    auto big = build_category(QQ, spec, -8, 8);
    auto rs = validate_setup(*small), rb = validate_setup(*big);
    EXPECT_EQ(rs.all_pass(), rb.all_pass());
    EXPECT_EQ(rs.nilpotency_degree, rb.nilpotency_degree);
    for (std::size_t p = 0; p < small->size(); ++p) {
      if (!small->settled(p)) continue;
      const auto bp = *big->find(small->label(p));
      for (std::size_t q = 0; q < small->size(); ++q) {
        const auto bq = *big->find(small->label(q));
        ASSERT_EQ(small->dim(p, q), big->dim(bp, bq));
        for (std::size_t r = 0; r < small->size(); ++r) {
          const auto br = *big->find(small->label(r));
          const auto* a = small->table(p, q, r);
          const auto* b = big->table(bp, bq, br);
          ASSERT_EQ(a == nullptr, b == nullptr);
          if (a) EXPECT_EQ(*a, *b);
        }
      }
      if (rs.serre_data && rs.serre_data->defined(p))
        EXPECT_EQ(small->label(rs.serre_data->S.at(p)), big->label(rb.serre_data->S.at(bp)));
    }
  }
}
