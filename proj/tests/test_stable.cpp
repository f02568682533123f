#include <gtest/gtest.h>

#include "env.hpp"

using namespace qshape;
using namespace qshape::testing;

namespace {

Rationals QQ;
PrimeField F5(5);

template <class F>
bool iso(RepPtr<F> a, RepPtr<F> b) {
  return find_isomorphism(a, b).has_value();
}

}  // namespace

TEST(Certificate, Reasons) {
  Env<Rationals> cyc(QQ, QuiverSpec::cyclic(3), 0, 0);
  EXPECT_EQ(cyc.fr.certify_semiprojective(cyc.qa.stalk(0)).reason, CertReason::SemisimpleCoefficients);
  EXPECT_EQ(cyc.fr.certify_semiinjective(cyc.qa.stalk(0)).reason, CertReason::SemisimpleCoefficients);

  Env<Rationals> d(QQ, QuiverSpec::complexes(), -4, 4, true);
  std::mt19937_64 rng(3);
  auto P = random_projective_complex(d.qa, rng, -1, 2);
  EXPECT_EQ(d.fr.certify_semiprojective(P).reason, CertReason::RightBoundedProjectiveValues);
  auto S = d.stalk(0, d.simple_A());
  EXPECT_EQ(d.fr.certify_semiprojective(S).reason, CertReason::Unknown);
  EXPECT_EQ(d.fr.certify_semiinjective(S).reason, CertReason::Unknown);
  EXPECT_EQ(d.fr.certify_semiinjective(d.stalk(0, d.qa.regular_module())).reason,
            CertReason::LeftBoundedInjectiveValues);
}

TEST(Certificate, ProjectiveFiltration) {
  Env<Rationals> c(QQ, QuiverSpec::cyclic(2), 0, 0, true);
  auto A = c.qa.regular_module();
  auto P0 = c.qa.proj_rep(0, A), P1 = c.qa.proj_rep(1, A);
  auto sum = direct_sum({P0, P1}, c.qa.T_ptr());
  auto cert = c.fr.certify_semiprojective(sum.object, {sum.injections[0], identity_morphism(sum.object)});
  EXPECT_EQ(cert.reason, CertReason::ProjectiveFiltration);
  auto S = c.qa.stalk(0, c.simple_A());
  EXPECT_EQ(c.fr.certify_semiprojective(S, {identity_morphism(S)}).reason, CertReason::Unknown);
}

TEST(Suspension, ComplexStalk) {
  Env<Rationals> e(QQ, QuiverSpec::complexes(), -6, 6);
  auto c = e.fr.embed_projective(e.stalk(0));
  EXPECT_EQ(c.middle()->dims(), e.interval(1, 2)->dims());
  EXPECT_TRUE(is_projective(c.middle()));
  EXPECT_TRUE(iso(c.quotient(), e.stalk(1)));
  EXPECT_TRUE(iso(e.fr.suspension_power(e.stalk(0), 3), e.stalk(3)));
}

TEST(Suspension, NComplexStalk) {
  Env<Rationals> e(QQ, QuiverSpec::nlinear(3), -6, 6, true);
  auto A = e.qa.regular_module();
  auto c = e.fr.embed_projective(e.stalk(0, A));
  EXPECT_TRUE(iso(c.middle(), e.interval(2, 3, A)));
  EXPECT_TRUE(iso(c.quotient(), e.interval(2, 2, A)));
}

TEST(Suspension, CyclicStalk) {
  Env<Rationals> e(QQ, QuiverSpec::cyclic(3), 0, 0);
  EXPECT_TRUE(iso(e.fr.suspend(e.qa.stalk(0)), e.qa.stalk(*e.fr.serre().inverse(0))));
  EXPECT_TRUE(iso(e.fr.suspend(e.qa.stalk(0)), e.qa.stalk(1)));
}

TEST(Suspension, AgreesWithShiftAndSignFlip) {
  std::mt19937_64 rng(41);
  for (bool dual : {false, true}) {
    Env<PrimeField> e(F5, QuiverSpec::complexes(), -6, 6, dual);
    for (int t = 0; t < 10; ++t) {
      auto P = random_projective_complex(e.qa, rng, -2, 3);
      auto iso_map = find_isomorphism(e.fr.suspend(P), e.shift(*P));
      ASSERT_TRUE(iso_map.has_value());
      EXPECT_FALSE(iso_map->naturality_error());
      EXPECT_TRUE(iso_map->is_iso());
    }
  }
}

TEST(Suspension, ProjectiveGoesToProjective) {
  Env<Rationals> e(QQ, QuiverSpec::complexes(), -6, 6, true);
  auto s = e.fr.suspend(e.proj(0));
  EXPECT_TRUE(is_projective(s));
}

TEST(Suspension, CyclicPeriodicity) {
  std::mt19937_64 rng(5);
  for (int m : {1, 2, 3}) {
    Env<PrimeField> e(F5, QuiverSpec::cyclic(m), 0, 0);
    std::vector<RepPtr<PrimeField>> objs{e.qa.stalk(0)};
    for (int t = 0; t < 4; ++t) objs.push_back(random_presented(e.qa.T_ptr(), rng));
    for (const auto& x : objs) {
      EXPECT_TRUE(e.fr.stable_isomorphism(e.fr.suspension_power(x, 2 * m), x).has_value()) << "m=" << m;
      if (m % 2 == 0) {
        EXPECT_TRUE(e.fr.stable_isomorphism(e.fr.suspension_power(x, m), x).has_value());
      }
    }
  }
}

TEST(Suspension, LoopInvertsSuspension) {
  Env<Rationals> e(QQ, QuiverSpec::cyclic(3), 0, 0);
  auto P = e.qa.stalk(0);
  auto back = e.fr.loop(e.fr.suspend(P));
  EXPECT_TRUE(e.fr.stable_isomorphism(back, P).has_value());
  auto h = e.fr.stable_hom(back, P);
  EXPECT_EQ(h.dim(), 1u);
}

TEST(StableHom, Examples) {
  Env<Rationals> e(QQ, QuiverSpec::complexes(), -6, 6);
  EXPECT_EQ(e.fr.stable_hom(e.stalk(0), e.stalk(0)).dim(), 1u);
  EXPECT_EQ(e.fr.stable_hom(e.proj(0), e.proj(0)).dim(), 0u);
  EXPECT_EQ(e.fr.stable_hom(e.stalk(0), e.stalk(1)).dim(), 0u);
  auto h = e.fr.stable_hom(e.stalk(0), e.stalk(0));
  EXPECT_FALSE(h.is_zero(identity_morphism(e.stalk(0))));
}

TEST(StableHom, IdealProperty) {
  Env<PrimeField> e(F5, QuiverSpec::complexes(), -8, 8);
  std::mt19937_64 rng(17);
  for (int t = 0; t < 8; ++t) {
    auto x = random_linear_rep(e.qa, rng, -2, 2, 3), y = random_linear_rep(e.qa, rng, -2, 2, 3),
         z = random_linear_rep(e.qa, rng, -2, 2, 3);
    auto hxy = e.fr.stable_hom(x, y);
    auto hxz = e.fr.stable_hom(x, z);
    auto chi = random_morphism(y, z, rng);
    auto sub = hxy.subspace();
    for (std::size_t k = 0; k < sub.cols(); ++k) {
      auto psi = zero_morphism(x, y);
      for (std::size_t i = 0; i < sub.rows(); ++i) psi = psi + scaled(hxy.ambient()[i], sub(i, k));
      EXPECT_TRUE(hxz.is_zero(compose(chi, psi)));
    }
  }
}

TEST(StableHom, LiftingAlongTheCover) {
  // Brute force: span of beta o alpha through every projective of the window.
  Env<PrimeField> e(F5, QuiverSpec::complexes(), -5, 5);
  std::mt19937_64 rng(23);
  for (int t = 0; t < 6; ++t) {
    auto x = random_linear_rep(e.qa, rng, -1, 2, 2), y = random_linear_rep(e.qa, rng, -1, 2, 2);
    auto h = e.fr.stable_hom(x, y);
    std::vector<Vec<PrimeField>> through;
    for (std::size_t q = 0; q < e.Q->size(); ++q) {
      if (!e.Q->out_complete(q)) continue;
      auto P = e.qa.proj_rep(q);
      for (const auto& a : hom_space(x, P))
        for (const auto& b : hom_space(P, y)) through.push_back(flatten(compose(b, a)));
    }
    StableHom<PrimeField> brute(x, y, hom_space(x, y), through);
    EXPECT_EQ(h.dim(), brute.dim());
  }
}

TEST(StableHom, InjectiveSideAgrees) {
  std::mt19937_64 rng(29);
  Env<PrimeField> e(F5, QuiverSpec::complexes(), -8, 8);
  for (int t = 0; t < 6; ++t) {
    auto x = random_linear_rep(e.qa, rng, -2, 2, 3), y = random_linear_rep(e.qa, rng, -2, 2, 3);
    EXPECT_EQ(e.fr.stable_hom(x, y).dim(), e.fr.stable_hom_injective(x, y).dim());
  }
  Env<PrimeField> c(F5, QuiverSpec::cyclic(3), 0, 0);
  for (int t = 0; t < 6; ++t) {
    auto x = random_presented(c.qa.T_ptr(), rng), y = random_presented(c.qa.T_ptr(), rng);
    EXPECT_EQ(c.fr.stable_hom(x, y).dim(), c.fr.stable_hom_injective(x, y).dim());
  }
}

TEST(Resolution, FieldCoefficientsIsIdentity) {
  Env<Rationals> e(QQ, QuiverSpec::cyclic(2), 0, 0);
  auto x = e.qa.stalk(0);
  auto r = e.fr.semiproj_resolution(x);
  EXPECT_EQ(r.object, x);
  EXPECT_TRUE(r.phi.is_iso());
}

TEST(Resolution, SimpleOverDualNumbers) {
  Env<Rationals> e(QQ, QuiverSpec::complexes(), -6, 6, true);
  auto r = e.fr.semiproj_resolution(e.stalk(0, e.simple_A()));
  EXPECT_EQ(r.certificate.reason, CertReason::RightBoundedProjectiveValues);
  EXPECT_TRUE(r.truncated);
  for (std::size_t p = 0; p < e.Q->size(); ++p) EXPECT_EQ(e.qa.dim_at(*r.object, p), e.deg(p) >= 0 ? 2u : 0u);
  EXPECT_TRUE(e.fr.homology().is_weq(r.phi));
}

TEST(Resolution, RandomOverDualNumbers) {
  std::mt19937_64 rng(31);
  for (int N : {2, 3}) {
    Env<PrimeField> e(F5, N == 2 ? QuiverSpec::complexes() : QuiverSpec::nlinear(N), -10, 6, true);
    for (int t = 0; t < 5; ++t) {
      auto x = random_exact_complex(e.qa, rng, -2, 2);
      auto y = random_projective_complex(e.qa, rng, -2, 2);
      auto s = e.stalk(t % 3 - 1, e.simple_A());
      for (const auto& o : {x, y, s}) {
        auto r = e.fr.semiproj_resolution(o);
        EXPECT_TRUE(r.certificate.known());
        EXPECT_TRUE(e.fr.homology().is_weq(r.phi)) << "N=" << N;
      }
    }
  }
}

TEST(DerivedHom, StalkAgainstClassicHomology) {
  std::mt19937_64 rng(37);
  Env<PrimeField> e(F5, QuiverSpec::complexes(), -8, 8);
  for (int t = 0; t < 6; ++t) {
    auto x = random_linear_rep(e.qa, rng, -2, 2, 3);
    for (int q = -3; q <= 3; ++q)
      EXPECT_EQ(e.fr.dq_hom(e.stalk(q), x).dim(), ch_oracle(e.qa, *x, q)) << "q=" << q;
  }
}

TEST(DerivedHom, ExactSemiprojectiveIsZero) {
  std::mt19937_64 rng(43);
  Env<PrimeField> e(F5, QuiverSpec::complexes(), -8, 8, true);
  for (int t = 0; t < 5; ++t) {
    auto E = random_exact_complex(e.qa, rng, -2, 2);
    auto P = random_projective_complex(e.qa, rng, -2, 2);
    EXPECT_EQ(ext_qa(1, P, *E), 0u);
    if (e.fr.values_projective(*E)) {
      auto h = e.fr.dq_hom(E, E);
      EXPECT_TRUE(h.is_zero(identity_morphism(E)));
    }
  }
}

TEST(Cone, Examples) {
  Env<Rationals> e(QQ, QuiverSpec::complexes(), -6, 6);
  auto s = e.stalk(0);
  auto tri = e.fr.cone(identity_morphism(s));
  EXPECT_EQ(tri.C()->dims(), e.interval(1, 2)->dims());
  EXPECT_TRUE(is_projective(tri.C()));
  auto zero = std::make_shared<const Representation<Rationals>>(Representation<Rationals>::zero(e.qa.T_ptr()));
  auto t0 = e.fr.cone(zero_morphism(s, zero));
  EXPECT_TRUE(iso(t0.C(), e.fr.suspend(s)));
}

TEST(Cone, LegsComposeToStableZero) {
  std::mt19937_64 rng(47);
  Env<PrimeField> e(F5, QuiverSpec::complexes(), -8, 8);
  for (int t = 0; t < 6; ++t) {
    auto x = random_linear_rep(e.qa, rng, -2, 2, 3), y = random_linear_rep(e.qa, rng, -2, 2, 3);
    auto tri = e.fr.cone(random_morphism(x, y, rng));
    auto r = e.fr.rotate(tri);
    for (const auto& tr : {tri, r}) {
      EXPECT_TRUE(e.fr.stable_hom(tr.X(), tr.C()).is_zero(compose(tr.g, tr.f)));
      EXPECT_TRUE(e.fr.stable_hom(tr.Y(), tr.SX()).is_zero(compose(tr.h, tr.g)));
    }
    EXPECT_TRUE(e.fr.stable_hom(tri.C(), r.SX()).is_zero(compose(r.h, tri.h)));
    EXPECT_TRUE(e.fr.stable_hom(x, x).dim() == 0 || is_projective(e.fr.cone(identity_morphism(x)).C()));
  }
}

TEST(Model, Examples) {
  Env<Rationals> e(QQ, QuiverSpec::complexes(), -6, 6);
  auto disk = e.proj(0);
  auto zero = std::make_shared<const Representation<Rationals>>(Representation<Rationals>::zero(e.qa.T_ptr()));
  auto c = e.fr.classify_morphism(zero_morphism(zero, disk), ModelStructure::Projective);
  EXPECT_EQ(c.trivial_cof, Flag::Yes);
  EXPECT_EQ(c.cof, Flag::Yes);
  EXPECT_EQ(c.weq, Flag::Yes);
  auto epi = cokernel(zero_morphism(disk, disk)).projection;
  EXPECT_EQ(e.fr.classify_morphism(epi, ModelStructure::Projective).fib, Flag::Yes);
  EXPECT_EQ(e.fr.classify_morphism(zero_morphism(zero, e.stalk(0)), ModelStructure::Injective).cof, Flag::Yes);
}

TEST(Model, TrivialClassesAreIntersections) {
  std::mt19937_64 rng(53);
  Env<PrimeField> e(F5, QuiverSpec::complexes(), -8, 8);
  for (int t = 0; t < 12; ++t) {
    auto x = random_linear_rep(e.qa, rng, -2, 2, 3), y = random_linear_rep(e.qa, rng, -2, 2, 3);
    std::vector<RepMorphism<PrimeField>> ms{random_morphism(x, y, rng)};
    ms.push_back(kernel(ms[0]).inclusion);
    ms.push_back(cokernel(ms[0]).projection);
    auto sum = direct_sum({x, e.fr.embed_projective(x).middle()}, e.qa.T_ptr());
    ms.push_back(sum.injections[0]);
    ms.push_back(sum.projections[0]);
    for (const auto& m : ms) {
      auto p = e.fr.classify_morphism(m, ModelStructure::Projective);
      auto i = e.fr.classify_morphism(m, ModelStructure::Injective);
      EXPECT_EQ(p.fib, flag(m.is_epi()));
      EXPECT_EQ(i.cof, flag(m.is_mono()));
      EXPECT_EQ(p.trivial_cof, flag(p.cof == Flag::Yes && p.weq == Flag::Yes));
      EXPECT_EQ(i.trivial_fib, flag(i.fib == Flag::Yes && i.weq == Flag::Yes));
      EXPECT_EQ(p.trivial_fib, flag(p.fib == Flag::Yes && p.weq == Flag::Yes));
      EXPECT_EQ(i.trivial_cof, flag(i.cof == Flag::Yes && i.weq == Flag::Yes));
    }
  }
}

TEST(Perfect, Examples) {
  Env<Rationals> e(QQ, QuiverSpec::complexes(), -6, 6, true);
  EXPECT_TRUE(e.fr.is_strictly_perfect(*e.proj(0)));
  EXPECT_FALSE(e.fr.is_strictly_perfect(*e.stalk(0, e.simple_A())));
  Env<Rationals> k(QQ, QuiverSpec::complexes(), -6, 6);
  EXPECT_TRUE(k.fr.perfect_witness(identity_morphism(k.stalk(0))));
  auto r = e.fr.semiproj_resolution(e.stalk(0, e.simple_A()));
  EXPECT_FALSE(e.fr.is_strictly_perfect(*r.phi.target));
  EXPECT_TRUE(r.truncated);
  EXPECT_THROW(e.fr.perfect_witness(r.phi), WindowError);
}
