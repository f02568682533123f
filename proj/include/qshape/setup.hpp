#pragma once

// Checks of the standing hypotheses on a realized category: hom finiteness,
// local boundedness, a Serre functor, the strong retraction and nilpotence of
// the pseudoradical. Also the cycle test.

#include <functional>
#include <map>
#include <optional>
#include <random>
#include <variant>
#include <string>
#include <vector>

#include "qshape/category.hpp"

namespace qshape {

/// Serre functor on the window interior. lambda[p] is a functional on
/// Q(p, Sp); the pairing Q(q,Sp) x Q(p,q) -> k is (b, a) -> lambda_p(b o a).
template <class F>
struct SerreData {
  std::map<std::size_t, std::size_t> S;      // p -> Sp, for settled p
  std::map<std::size_t, std::size_t> S_inv;  // Sp -> p
  std::map<std::size_t, Vec<F>> lambda;

  bool defined(std::size_t p) const { return S.count(p) > 0; }
  std::optional<std::size_t> inverse(std::size_t q) const {
    auto it = S_inv.find(q);
    if (it == S_inv.end()) return std::nullopt;
    return it->second;
  }
};

/// pairing(p,q)[b][a] = lambda_p(beta_b o alpha_a), beta in Q(q,Sp), alpha in Q(p,q).
template <class F>
Matrix<F> serre_pairing(const KCategory<F>& cat, const SerreData<F>& sd, std::size_t p, std::size_t q) {
  const auto c = sd.S.at(p);
  const auto& lam = sd.lambda.at(p);
  const auto dpq = cat.dim(p, q), dqc = cat.dim(q, c), dpc = cat.dim(p, c);
  Matrix<F> G(cat.field(), dqc, dpq);
  const auto* tab = cat.table(p, q, c);
  if (!tab) return G;
  for (std::size_t b = 0; b < dqc; ++b)
    for (std::size_t a = 0; a < dpq; ++a) {
      auto s = cat.field().zero();
      const auto* row = &(*tab)[(b * dpq + a) * dpc];
      for (std::size_t k = 0; k < dpc; ++k)
        if (!is_zero(row[k])) s += row[k] * lam[k];
      G(b, a) = s;
    }
  return G;
}

/// S on morphisms: the unique S(f) in Q(Sp', Sp) with
/// lambda_p(S(f) o g) = lambda_p'(g o f) for all g in Q(p, Sp').
template <class F>
std::optional<Vec<F>> serre_on_morphism(const KCategory<F>& cat, const SerreData<F>& sd, std::size_t pp,
                                        std::size_t p, const Vec<F>& f) {
  const auto spp = sd.S.at(pp), sp = sd.S.at(p);
  const auto& field = cat.field();
  const auto dg = cat.dim(p, spp);
  const auto G = serre_pairing(cat, sd, p, spp);  // rows: Q(spp, sp), cols: Q(p, spp)
  Vec<F> rhs(dg, field.zero());
  const auto& lam = sd.lambda.at(pp);
  for (std::size_t j = 0; j < dg; ++j) {
    auto gf = cat.compose(pp, p, spp, unit_vec(field, dg, j), f);
    for (std::size_t k = 0; k < gf.size(); ++k) rhs[j] += gf[k] * lam[k];
  }
  (void)sp;
  return solve(G.transpose(), rhs);
}

struct Verdict {
  bool pass = true;
  std::string witness;
};

template <class F>
struct SetupReport {
  Verdict preadditive;
  Verdict hom_finite;
  Verdict locally_bounded;
  Verdict serre;
  Verdict strong_retraction;
  Verdict nilpotence;
  std::size_t nilpotency_degree = 0;
  bool has_cycles = false;
  std::optional<SerreData<F>> serre_data;

  bool all_pass() const {
    return preadditive.pass && hom_finite.pass && locally_bounded.pass && serre.pass && strong_retraction.pass &&
           nilpotence.pass;
  }
};

namespace detail {

template <class F>
bool pairing_nondegenerate(const KCategory<F>& cat, std::size_t p, std::size_t c, const Vec<F>& lam) {
  SerreData<F> sd;
  sd.S[p] = c;
  sd.lambda[p] = lam;
  for (std::size_t q = 0; q < cat.size(); ++q) {
    if (cat.dim(p, q) == 0) continue;
    if (!is_invertible(serre_pairing(cat, sd, p, q))) return false;
  }
  return true;
}

template <class F>
std::vector<Vec<F>> lambda_candidates(const F& field, std::size_t d) {
  std::vector<Vec<F>> out;
  for (std::size_t k = d; k-- > 0;) out.push_back(unit_vec(field, d, k));
  for (std::size_t k = 1; k <= d; ++k) {
    Vec<F> v(d, field.zero());
    for (std::size_t j = 0; j < k; ++j) v[d - 1 - j] = field.one();
    out.push_back(v);
  }
  std::mt19937_64 rng(0x5e22e);
  for (int t = 0; t < 24; ++t) {
    Vec<F> v(d, field.zero());
    for (auto& x : v) x = field.random(rng);
    out.push_back(v);
  }
  return out;
}

}  // namespace detail

struct SerreFailure {
  std::string reason;
};

/// Search a Serre functor on the settled objects. With a hint, only the hinted
/// images are tried.
template <class F>
std::variant<SerreData<F>, SerreFailure> find_serre(const KCategory<F>& cat,
                                                    const std::map<std::size_t, std::size_t>* hint = nullptr) {
  const auto n = cat.size();
  const bool finite_kind = cat.shape().kind == Kind::Finite || cat.shape().kind == Kind::Cyclic;
  std::vector<std::size_t> domain;
  for (std::size_t p = 0; p < n; ++p)
    if (cat.settled(p)) domain.push_back(p);
  if (domain.empty()) return SerreFailure{"window has no settled objects; enlarge it"};

  // Candidates with matching dimensions and a nondegenerate functional.
  std::vector<std::vector<std::pair<std::size_t, Vec<F>>>> cands(domain.size());
  for (std::size_t k = 0; k < domain.size(); ++k) {
    const auto p = domain[k];
    std::vector<std::size_t> targets;
    if (hint) {
      auto it = hint->find(p);
      if (it != hint->end()) targets.push_back(it->second);
    } else {
      for (std::size_t c = 0; c < n; ++c) targets.push_back(c);
    }
    for (auto c : targets) {
      if (!cat.in_complete(c)) continue;
      bool match = true;
      for (std::size_t q = 0; q < n && match; ++q) match = cat.dim(p, q) == cat.dim(q, c);
      if (!match || cat.dim(p, c) == 0) continue;
      for (const auto& lam : detail::lambda_candidates(cat.field(), cat.dim(p, c)))
        if (detail::pairing_nondegenerate(cat, p, c, lam)) {
          cands[k].push_back({c, lam});
          break;
        }
    }
    if (cands[k].empty())
      return SerreFailure{"no object c with dim Q(q,c) = dim Q(" + cat.label(p) +
                          ",q) for all q admits a nondegenerate pairing at " + cat.label(p)};
  }

  // Backtracking for an injective assignment (bijective for finite kinds).
  std::vector<std::size_t> choice(domain.size(), 0);
  std::vector<bool> used(n, false);
  std::function<bool(std::size_t)> go = [&](std::size_t k) -> bool {
    if (k == domain.size()) return true;
    for (std::size_t j = 0; j < cands[k].size(); ++j) {
      const auto c = cands[k][j].first;
      if (used[c]) continue;
      used[c] = true;
      choice[k] = j;
      if (go(k + 1)) return true;
      used[c] = false;
    }
    return false;
  };
  if (!go(0)) return SerreFailure{"no injective object map satisfies the dimension constraints"};
  SerreData<F> sd;
  for (std::size_t k = 0; k < domain.size(); ++k) {
    const auto& [c, lam] = cands[k][choice[k]];
    sd.S[domain[k]] = c;
    sd.S_inv[c] = domain[k];
    sd.lambda[domain[k]] = lam;
  }
  if (finite_kind && sd.S.size() != n) return SerreFailure{"object map is not a bijection"};
  return sd;
}

template <class F>
bool has_cycles(const KCategory<F>& cat) {
  const auto n = cat.size();
  std::vector<int> state(n, 0);
  std::function<bool(std::size_t)> dfs = [&](std::size_t p) -> bool {
    state[p] = 1;
    for (std::size_t q = 0; q < n; ++q) {
      if (cat.rad_dim(p, q) == 0) continue;
      if (state[q] == 1) return true;
      if (state[q] == 0 && dfs(q)) return true;
    }
    state[p] = 2;
    return false;
  };
  for (std::size_t p = 0; p < n; ++p)
    if (state[p] == 0 && dfs(p)) return true;
  return false;
}

/// r_q o r_q and Q(p,q) o Q(q,p) (p != q) have no identity component.
template <class F>
Verdict check_strong_retraction(const KCategory<F>& cat) {
  const auto n = cat.size();
  for (std::size_t q = 0; q < n; ++q) {
    const auto dqq = cat.dim(q, q);
    if (dqq == 0) return {false, "Q(" + cat.label(q) + "," + cat.label(q) + ") is zero"};
    for (std::size_t p = 0; p < n; ++p) {
      const auto* tab = cat.table(q, p, q);
      if (!tab) continue;
      const auto dqp = cat.dim(q, p), dpq = cat.dim(p, q);
      for (std::size_t i = 0; i < dpq; ++i)
        for (std::size_t j = 0; j < dqp; ++j) {
          if (p == q && (i == 0 || j == 0)) continue;
          if (!is_zero((*tab)[(i * dqp + j) * dqq + 0]))
            return {false, "composite through " + cat.label(p) + " has an identity component at " + cat.label(q)};
        }
    }
  }
  return {};
}

template <class F>
SetupReport<F> validate_setup(const KCategory<F>& cat, const std::map<std::size_t, std::size_t>* hint = nullptr) {
  SetupReport<F> rep;
  const auto& nil = cat.nilpotence();
  rep.preadditive = {true, "by construction"};
  rep.hom_finite = nil.hom_finite ? Verdict{} : Verdict{false, nil.witness};
  rep.locally_bounded = nil.locally_bounded ? Verdict{} : Verdict{false, nil.witness};
  rep.nilpotence = nil.ok ? Verdict{} : Verdict{false, nil.witness};
  rep.nilpotency_degree = nil.ok ? nil.degree : 0;
  rep.strong_retraction = check_strong_retraction(cat);
  rep.has_cycles = has_cycles(cat);
  if (!nil.hom_finite) {
    rep.serre = {false, "hom spaces are not finite"};
  } else {
    auto res = find_serre(cat, hint);
    if (std::holds_alternative<SerreData<F>>(res)) {
      rep.serre_data = std::get<SerreData<F>>(std::move(res));
    } else {
      rep.serre = {false, std::get<SerreFailure>(res).reason};
    }
  }
  return rep;
}

}  // namespace qshape
