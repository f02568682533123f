#pragma once

// The Frobenius calculus on Q,A-Mod: certificates for semiprojective and
// semiinjective objects, semiprojective resolutions, suspension and loop,
// stable Homs, Hom in the Q-shaped derived category, mapping cones, the two
// model structures and perfect objects.

#include <optional>
#include <string>
#include <vector>

#include "qshape/homology.hpp"

namespace qshape {

enum class CertKind { Semiprojective, Semiinjective };

enum class CertReason {
  SemisimpleCoefficients,
  RightBoundedProjectiveValues,
  LeftBoundedInjectiveValues,
  ProjectiveFiltration,
  Unknown
};

inline std::string to_string(CertReason r) {
  switch (r) {
    case CertReason::SemisimpleCoefficients: return "SemisimpleCoefficients";
    case CertReason::RightBoundedProjectiveValues: return "RightBoundedProjectiveValues";
    case CertReason::LeftBoundedInjectiveValues: return "LeftBoundedInjectiveValues";
    case CertReason::ProjectiveFiltration: return "ProjectiveFiltration";
    case CertReason::Unknown: return "Unknown";
  }
  return "Unknown";
}

template <class F>
struct Certificate {
  RepPtr<F> object;
  CertKind kind = CertKind::Semiprojective;
  CertReason reason = CertReason::Unknown;
  bool known() const { return reason != CertReason::Unknown; }
};

/// 0 -> X -> R -> X' -> 0.
template <class F>
struct Conflation {
  RepMorphism<F> iota, pi;
  std::vector<Matrix<F>> section;  // objectwise right inverses of pi
  const RepPtr<F>& middle() const { return iota.target; }
  const RepPtr<F>& quotient() const { return pi.target; }
};

/// X -f-> Y -g-> C -h-> Sigma X.
template <class F>
struct Triangle {
  RepMorphism<F> f, g, h;
  const RepPtr<F>& X() const { return f.source; }
  const RepPtr<F>& Y() const { return f.target; }
  const RepPtr<F>& C() const { return g.target; }
  const RepPtr<F>& SX() const { return h.target; }
};

/// Hom(X, Y) modulo the morphisms factoring through a projective (or an
/// injective).
template <class F>
class StableHom {
 public:
  StableHom(RepPtr<F> x, RepPtr<F> y, std::vector<RepMorphism<F>> ambient, const std::vector<Vec<F>>& sub)
      : x_(std::move(x)), y_(std::move(y)), ambient_(std::move(ambient)) {
    const auto& f = x_->field();
    std::size_t len = 0;
    for (std::size_t p = 0; p < x_->cat().size(); ++p) len += x_->dim(p) * y_->dim(p);
    amb_ = Matrix<F>(f, len, ambient_.size());
    for (std::size_t k = 0; k < ambient_.size(); ++k) {
      auto v = flatten(ambient_[k]);
      for (std::size_t i = 0; i < len; ++i) amb_(i, k) = v[i];
    }
    Matrix<F> coords(f, ambient_.size(), sub.size());
    for (std::size_t k = 0; k < sub.size(); ++k) {
      auto c = coordinates(sub[k]);
      for (std::size_t i = 0; i < c.size(); ++i) coords(i, k) = c[i];
    }
    sub_ = coords.cols() ? span_basis(coords) : coords;
    quo_.emplace(f, ambient_.size(), sub_);
  }

  const std::vector<RepMorphism<F>>& ambient() const { return ambient_; }
  /// Columns: ambient coordinates of a basis of the factoring subspace.
  const Matrix<F>& subspace() const { return sub_; }
  std::size_t dim() const { return quo_->dim(); }
  std::size_t ambient_dim() const { return ambient_.size(); }
  std::size_t subspace_dim() const { return sub_.cols(); }

  std::vector<RepMorphism<F>> representatives() const {
    std::vector<RepMorphism<F>> out;
    auto s = quo_->section();
    for (std::size_t k = 0; k < s.cols(); ++k) out.push_back(combine(s.column(k)));
    return out;
  }
  Vec<F> class_of(const RepMorphism<F>& m) const { return quo_->projection().apply(coordinates(flatten(m))); }
  bool is_zero(const RepMorphism<F>& m) const { return is_zero_vec<F>(class_of(m)); }

 private:
  Vec<F> coordinates(const Vec<F>& flat) const {
    if (ambient_.empty()) {
      if (!is_zero_vec<F>(flat)) throw std::logic_error("stable hom: morphism outside the ambient space");
      return {};
    }
    auto c = solve(amb_, flat);
    if (!c) throw std::logic_error("stable hom: morphism outside the ambient space");
    return *c;
  }
  RepMorphism<F> combine(const Vec<F>& c) const {
    auto m = zero_morphism(x_, y_);
    for (std::size_t k = 0; k < c.size(); ++k)
      if (!qshape::is_zero(c[k])) m = m + scaled(ambient_[k], c[k]);
    return m;
  }

  RepPtr<F> x_, y_;
  std::vector<RepMorphism<F>> ambient_;
  Matrix<F> amb_, sub_;
  std::optional<Quotient<F>> quo_;
};

enum class Flag { No, Yes, Unknown };

inline std::string to_string(Flag f) { return f == Flag::Yes ? "true" : f == Flag::No ? "false" : "unknown"; }
inline Flag flag(bool b) { return b ? Flag::Yes : Flag::No; }

enum class ModelStructure { Projective, Injective };

struct MorphismClass {
  Flag weq = Flag::Unknown, cof = Flag::Unknown, fib = Flag::Unknown, trivial_cof = Flag::Unknown,
       trivial_fib = Flag::Unknown;
};

template <class F>
struct SemiprojResolution {
  RepPtr<F> object;
  RepMorphism<F> phi;  // object -> X, a weak equivalence
  Certificate<F> certificate;
  bool truncated = false;  // cut off at the window top
};

template <class F>
class Frobenius {
 public:
  Frobenius(const QA<F>& qa, SerreData<F> sd) : qa_(qa), sd_(std::move(sd)), hom_(qa) {}

  const QA<F>& qa() const { return qa_; }
  const SerreData<F>& serre() const { return sd_; }
  Homology<F>& homology() { return hom_; }

  // --- certificates ---------------------------------------------------------

  bool values_projective(const Representation<F>& x) const {
    for (auto q : qa_.q_support(x))
      if (!is_projective(qa_.value(x, q))) return false;
    return true;
  }
  bool values_injective(const Representation<F>& x) const {
    for (auto q : qa_.q_support(x))
      if (!is_injective(qa_.value(x, q))) return false;
    return true;
  }

  /// filtration: monomorphisms into X with nested images, the last onto X.
  Certificate<F> certify_semiprojective(RepPtr<F> x, const std::vector<RepMorphism<F>>& filtration = {}) const {
    Certificate<F> c{x, CertKind::Semiprojective, CertReason::Unknown};
    if (qa_.semisimple())
      c.reason = CertReason::SemisimpleCoefficients;
    else if (qa_.Q().shape().is_linear() && values_projective(*x))
      c.reason = CertReason::RightBoundedProjectiveValues;
    else if (!filtration.empty() && projective_filtration(*x, filtration))
      c.reason = CertReason::ProjectiveFiltration;
    return c;
  }

  Certificate<F> certify_semiinjective(RepPtr<F> x) const {
    Certificate<F> c{x, CertKind::Semiinjective, CertReason::Unknown};
    if (qa_.semisimple())
      c.reason = CertReason::SemisimpleCoefficients;
    else if (qa_.Q().shape().is_linear() && values_injective(*x))
      c.reason = CertReason::LeftBoundedInjectiveValues;
    return c;
  }

  // --- resolutions ----------------------------------------------------------

  SemiprojResolution<F> semiproj_resolution(RepPtr<F> x) {
    auto cert = certify_semiprojective(x);
    if (cert.known()) return {x, identity_morphism(x), cert};
    if (!qa_.Q().shape().is_linear())
      throw std::invalid_argument(
          "semiprojective resolutions are implemented for A = k or for complexes and N-complexes; this category has "
          "cycles");
    auto r = linear_resolution(x);
    if (auto fail = hom_.weq_failure(r.phi))
      throw std::logic_error("semiprojective resolution is not a weak equivalence at H^" +
                             std::to_string(fail->first) + " of " + qa_.Q().label(fail->second));
    return r;
  }

  // --- suspension and loop --------------------------------------------------

  /// X -> R = sum over q in supp X of Q(S^-1 q, -) (x) X(q), the coinduced
  /// embedding written through the Serre pairing.
  Conflation<F> embed_projective(RepPtr<F> x) const {
    if (!certify_semiprojective(x).known())
      throw std::invalid_argument("embed_projective: object is not certified semiprojective");
    if (!values_projective(*x)) throw std::invalid_argument("embed_projective: values are not projective over A");
    return coinduced(x);
  }

  /// The same embedding for semiinjective objects with injective values.
  Conflation<F> embed_injective(RepPtr<F> x) const {
    if (!certify_semiinjective(x).known())
      throw std::invalid_argument("embed_injective: object is not certified semiinjective");
    if (!values_injective(*x)) throw std::invalid_argument("embed_injective: values are not injective over A");
    return coinduced(x);
  }

  RepPtr<F> suspend(RepPtr<F> x) const { return embed_projective(x).quotient(); }

  /// Kernel of the projective cover.
  RepPtr<F> loop(RepPtr<F> x) const {
    auto cov = projective_cover(x);
    return kernel(cov.epi).object;
  }

  RepPtr<F> suspension_power(RepPtr<F> x, std::size_t k) const {
    if (k == 0) throw std::invalid_argument("suspension_power: k must be positive");
    for (std::size_t i = 0; i < k; ++i) x = suspend(x);
    return x;
  }

  /// Sigma phi, induced on cokernels by the lift id (x) phi(q) between the embeddings.
  RepMorphism<F> suspend_morphism(const RepMorphism<F>& phi) const {
    auto cx = embed_projective(phi.source), cy = embed_projective(phi.target);
    return suspend_morphism(phi, cx, cy);
  }

  /// X with its projective summands removed.
  RepPtr<F> strip_projectives(RepPtr<F> x) const {
    const auto& T = qa_.T();
    for (std::size_t t = 0; t < T.size(); ++t) {
      if (x->total_dim() == 0) break;
      if (x->dim(t) == 0) continue;
      auto P = representable(qa_.T_ptr(), t);
      std::optional<std::pair<std::size_t, Vec<F>>> soc;
      for (std::size_t u = 0; u < T.size(); ++u) {
        auto s = socle_basis(*P, u);
        if (s.cols() == 0) continue;
        if (soc || s.cols() > 1)
          throw std::invalid_argument("strip_projectives: the projective at " + T.label(t) + " has a non-simple socle");
        soc.emplace(u, s.column(0));
      }
      if (!soc) continue;
      auto m = x->eval(t, soc->first, soc->second);
      auto cols = independent_columns(m);
      if (cols.empty()) continue;
      if (!T.out_complete(t))
        throw WindowError("strip_projectives: a summand at " + T.label(t) + " is cut off; widen the window");
      std::vector<std::size_t> gens(cols.size(), t);
      std::vector<Vec<F>> elems;
      for (auto j : cols) elems.push_back(unit_vec(qa_.field(), x->dim(t), j));
      auto psi = from_generators(free_rep(qa_.T_ptr(), gens), gens, x, elems);
      if (!psi.is_mono()) throw std::logic_error("strip_projectives: summand map is not injective");
      x = cokernel(psi).object;
    }
    return x;
  }

  /// An isomorphism between X and Y after removing projective summands.
  std::optional<RepMorphism<F>> stable_isomorphism(RepPtr<F> x, RepPtr<F> y) const {
    return find_isomorphism(strip_projectives(x), strip_projectives(y));
  }

  // --- stable Homs ----------------------------------------------------------

  StableHom<F> stable_hom(RepPtr<F> x, RepPtr<F> y) const {
    auto cov = projective_cover(y);
    std::vector<Vec<F>> sub;
    for (const auto& psi : hom_space(x, cov.object)) sub.push_back(flatten(compose(cov.epi, psi)));
    return StableHom<F>(x, y, hom_space(x, y), sub);
  }

  /// Hom(X, Y) modulo morphisms factoring through the injective envelope of X.
  StableHom<F> stable_hom_injective(RepPtr<F> x, RepPtr<F> y) const {
    auto emb = embed_injective(x);
    std::vector<Vec<F>> sub;
    for (const auto& chi : hom_space(emb.middle(), y)) sub.push_back(flatten(compose(chi, emb.iota)));
    return StableHom<F>(x, y, hom_space(x, y), sub);
  }

  StableHom<F> dq_hom(RepPtr<F> x, RepPtr<F> y) {
    auto px = semiproj_resolution(x), py = semiproj_resolution(y);
    return stable_hom(px.object, py.object);
  }

  // --- cones ----------------------------------------------------------------

  /// C = coker (iota, -phi): X -> R + Y, with X -> Y -> C -> Sigma X.
  Triangle<F> cone(const RepMorphism<F>& phi) const {
    for (const auto& o : {phi.source, phi.target})
      if (!certify_semiprojective(o).known() || !values_projective(*o))
        throw std::invalid_argument("cone: source and target must be certified semiprojective");
    auto cx = embed_projective(phi.source);
    auto sum = direct_sum({cx.middle(), phi.target}, qa_.T_ptr());
    auto col = column_morphism(phi.source, sum, {cx.iota, -phi});
    auto ck = cokernel(col);
    auto g = compose(ck.projection, sum.injections[1]);
    auto row = compose(cx.pi, sum.projections[0]);
    RepMorphism<F> h{ck.object, cx.quotient(), {}};
    for (std::size_t p = 0; p < qa_.T().size(); ++p) h.comps.push_back(row.comps[p] * ck.section[p]);
    return {phi, g, h};
  }

  /// Y -> C -> Sigma X -> Sigma Y with last leg -Sigma f.
  Triangle<F> rotate(const Triangle<F>& t) const {
    auto cy = embed_projective(t.Y());
    auto cx = embed_projective(t.X());
    if (cx.quotient()->dims() != t.SX()->dims()) throw std::logic_error("rotate: suspension mismatch");
    auto sf = suspend_morphism(t.f, cx, cy);
    RepMorphism<F> last{t.SX(), sf.target, sf.comps};
    return {t.g, t.h, -last};
  }

  // --- model structures -----------------------------------------------------

  MorphismClass classify_morphism(const RepMorphism<F>& phi, ModelStructure s) {
    MorphismClass c;
    c.weq = guarded([&] { return flag(hom_.is_weq(phi)); });
    const bool mono = phi.is_mono(), epi = phi.is_epi();
    if (s == ModelStructure::Projective) {
      c.fib = flag(epi);
      c.cof = !mono ? Flag::No : guarded([&] {
        return certify_semiprojective(cokernel(phi).object).known() ? Flag::Yes : Flag::Unknown;
      });
      c.trivial_cof = !mono ? Flag::No : guarded([&] { return flag(is_projective(cokernel(phi).object)); });
      c.trivial_fib = !epi ? Flag::No : guarded([&] { return flag(hom_.is_exact(*kernel(phi).object)); });
    } else {
      c.cof = flag(mono);
      c.fib = !epi ? Flag::No : guarded([&] {
        return certify_semiinjective(kernel(phi).object).known() ? Flag::Yes : Flag::Unknown;
      });
      c.trivial_cof = !mono ? Flag::No : guarded([&] { return flag(hom_.is_exact(*cokernel(phi).object)); });
      c.trivial_fib = !epi ? Flag::No : guarded([&] { return flag(is_injective(kernel(phi).object)); });
    }
    return c;
  }

  // --- perfect objects ------------------------------------------------------

  bool is_strictly_perfect(const Representation<F>& k) const { return values_projective(k); }

  /// Both objects must sit inside the window interior so that is_weq is decided.
  bool perfect_witness(const RepMorphism<F>& phi) {
    const auto& Q = qa_.Q();
    for (const auto& o : {phi.source, phi.target})
      for (auto q : qa_.q_support(*o))
        if (!Q.in_complete(q) || !Q.out_complete(q))
          throw WindowError("perfect_witness: support reaches the window edge at " + Q.label(q) + "; widen the window");
    return is_strictly_perfect(*phi.source) && certify_semiprojective(phi.source).known() && hom_.is_weq(phi);
  }

 private:
  template <class Fn>
  static Flag guarded(Fn fn) {
    try {
      return fn();
    } catch (const WindowError&) {
      return Flag::Unknown;
    }
  }

  static std::vector<std::size_t> independent_columns(const Matrix<F>& m) {
    if (m.rows() == 0 || m.cols() == 0) return {};
    return rref(m).pivots;
  }

  bool projective_filtration(const Representation<F>& x, const std::vector<RepMorphism<F>>& filt) const {
    const auto& T = qa_.T();
    const auto& f = qa_.field();
    std::vector<Matrix<F>> prev;
    for (std::size_t p = 0; p < T.size(); ++p) prev.emplace_back(f, x.dim(p), 0);
    for (const auto& m : filt) {
      if (m.target->dims() != x.dims() || !m.is_mono() || m.naturality_error()) return false;
      auto im = image(m);
      std::vector<Matrix<F>> inside;
      for (std::size_t p = 0; p < T.size(); ++p) {
        if (prev[p].cols() == 0) {
          inside.emplace_back(f, im.object->dim(p), 0);
          continue;
        }
        auto s = solve_matrix(im.inclusion.comps[p], prev[p]);
        if (!s) return false;
        inside.push_back(std::move(*s));
      }
      try {
        if (!is_projective(quotient_by(im.object, inside).object)) return false;
      } catch (const WindowError&) {
        return false;
      }
      prev = im.inclusion.comps;
    }
    for (std::size_t p = 0; p < T.size(); ++p)
      if (prev[p].cols() != x.dim(p)) return false;
    return true;
  }

  Conflation<F> coinduced(RepPtr<F> x) const {
    const auto& Q = qa_.Q();
    const auto& f = qa_.field();
    const auto nA = qa_.nA();
    struct Part {
      std::size_t q, s;
      RepPtr<F> M;
    };
    std::vector<Part> parts;
    std::vector<RepPtr<F>> objs;
    for (auto q : qa_.q_support(*x)) {
      auto s = sd_.inverse(q);
      if (!s) throw WindowError("embedding needs S^-1 of " + Q.label(q) + "; widen the window");
      parts.push_back({q, *s, qa_.value(*x, q)});
      objs.push_back(qa_.induce(*s, parts.back().M));
    }
    auto R = objs.empty() ? std::make_shared<const Representation<F>>(Representation<F>::zero(qa_.T_ptr()))
                          : direct_sum(objs, qa_.T_ptr()).object;
    RepMorphism<F> iota = zero_morphism(x, R);
    for (std::size_t p = 0; p < Q.size(); ++p) {
      std::vector<std::optional<Matrix<F>>> pinv(parts.size());
      for (std::size_t k = 0; k < parts.size(); ++k) {
        if (Q.dim(parts[k].s, p) == 0) continue;
        pinv[k] = inverse(serre_pairing(Q, sd_, parts[k].s, p));
        if (!pinv[k]) throw std::logic_error("Serre pairing is degenerate at " + Q.label(p));
      }
      for (std::size_t v = 0; v < nA; ++v) {
        const auto t = qa_.obj(p, v);
        if (x->dim(t) == 0) continue;
        std::size_t off = 0;
        for (std::size_t k = 0; k < parts.size(); ++k) {
          const auto& pk = parts[k];
          const auto na = Q.dim(pk.s, p), mv = pk.M->dim(v);
          if (na && mv) {
            const auto nb = Q.dim(p, pk.q);
            std::vector<Matrix<F>> ev;
            for (std::size_t b = 0; b < nb; ++b) ev.push_back(qa_.eval_q(*x, p, pk.q, v, b));
            for (std::size_t a = 0; a < na; ++a) {
              Matrix<F> blk(f, mv, x->dim(t));
              for (std::size_t b = 0; b < nb; ++b)
                if (!is_zero((*pinv[k])(a, b))) blk += ev[b].scaled((*pinv[k])(a, b));
              iota.comps[t].set_block(off + a * mv, 0, blk);
            }
          }
          off += na * mv;
        }
      }
    }
    if (iota.naturality_error()) throw std::logic_error("embedding is not natural");
    if (!iota.is_mono()) throw std::logic_error("embedding is not injective");
    auto ck = cokernel(iota);
    return {iota, ck.projection, ck.section};
  }

  RepMorphism<F> suspend_morphism(const RepMorphism<F>& phi, const Conflation<F>& cx, const Conflation<F>& cy) const {
    const auto& Q = qa_.Q();
    const auto& f = qa_.field();
    auto sx = qa_.q_support(*phi.source), sy = qa_.q_support(*phi.target);
    auto rho = zero_morphism(cx.middle(), cy.middle());
    for (std::size_t p = 0; p < Q.size(); ++p)
      for (std::size_t v = 0; v < qa_.nA(); ++v) {
        const auto t = qa_.obj(p, v);
        std::size_t ro = 0;
        for (auto qy : sy) {
          const auto sq = *sd_.inverse(qy);
          const auto na = Q.dim(sq, p);
          const auto my = phi.target->dim(qa_.obj(qy, v));
          std::size_t co = 0;
          for (auto qx : sx) {
            const auto mx = phi.source->dim(qa_.obj(qx, v));
            const auto nx = Q.dim(*sd_.inverse(qx), p);
            if (qx == qy && na && mx && my)
              rho.comps[t].set_block(
                  ro, co, Matrix<F>::kronecker(Matrix<F>::identity(f, na), phi.comps[qa_.obj(qx, v)]));
            co += nx * mx;
          }
          ro += na * my;
        }
      }
    auto d = compose(rho, cx.iota) - compose(cy.iota, phi);
    if (!d.is_zero()) throw std::logic_error("suspension lift does not commute with the embeddings");
    RepMorphism<F> s{cx.quotient(), cy.quotient(), {}};
    for (std::size_t t = 0; t < qa_.T().size(); ++t)
      s.comps.push_back(cy.pi.comps[t] * rho.comps[t] * cx.section[t]);
    return s;
  }

  /// Degreewise construction on a linear category: P_j is the projective
  /// cover over A of {(y, x) in P_{j-1} + X_j : d^{N-1} y = 0, phi y = d x}.
  SemiprojResolution<F> linear_resolution(RepPtr<F> x) const {
    const auto& Q = qa_.Q();
    const auto& f = qa_.field();
    const auto nA = qa_.nA();
    const int N = Q.shape().complex_order();
    auto supp = qa_.q_support(*x);
    if (supp.empty()) return {x, identity_morphism(x), certify_semiprojective(x)};
    auto deg = [&](std::size_t q) { return Q.shape().coords[q][0]; };
    int bottom = deg(supp[0]), top = bottom;
    for (auto q : supp) bottom = std::min(bottom, deg(q));
    for (std::size_t q = 0; q < Q.size(); ++q) top = std::max(top, deg(q));

    std::map<int, RepPtr<F>> P;
    std::map<int, std::vector<Matrix<F>>> dP, phi;  // dP[j]: P_j -> P_{j-1}; phi[j]: P_j -> X_j
    auto Pmod = [&](int j) { return P.count(j) ? P.at(j) : qa_.zero_module(); };
    auto Xmod = [&](int j) {
      auto q = detail::at_degree(Q, j);
      return q ? qa_.value(*x, *q) : qa_.zero_module();
    };
    for (int j = bottom; j <= top; ++j) {
      auto Pj1 = Pmod(j - 1), PjN = Pmod(j - N), Xj = Xmod(j), Xj1 = Xmod(j - 1);
      auto src = direct_sum({Pj1, Xj}, qa_.A_ptr());
      auto tgt = direct_sum({PjN, Xj1}, qa_.A_ptr());
      RepMorphism<F> theta{src.object, tgt.object, {}};
      for (std::size_t v = 0; v < nA; ++v) {
        const auto a = Pj1->dim(v), b = Xj->dim(v), c = PjN->dim(v), e = Xj1->dim(v);
        Matrix<F> m(f, c + e, a + b);
        bool through = a && c;
        for (int s = j - 1; s > j - N; --s) through = through && dP.count(s);
        if (through) {
          auto D = Matrix<F>::identity(f, a);
          for (int s = j - 1; s > j - N; --s) D = dP.at(s)[v] * D;
          m.set_block(0, 0, D);
        }
        if (a && e) m.set_block(c, 0, phi.at(j - 1)[v]);
        if (b && e) m.set_block(c, a, -detail::d_power(qa_, *x, j, 1, v));
        theta.comps.push_back(std::move(m));
      }
      auto K = kernel(theta);
      auto cov = projective_cover(K.object);
      if (cov.gens.empty()) {
        bool rest = false;
        for (int k = j + 1; k <= top; ++k) rest = rest || Xmod(k)->total_dim() > 0;
        if (!rest) break;
        continue;
      }
      auto eps = compose(K.inclusion, cov.epi);
      P[j] = cov.object;
      auto d = compose(src.projections[0], eps), ph = compose(src.projections[1], eps);
      dP[j] = d.comps;
      phi[j] = ph.comps;
    }

    std::vector<RepPtr<F>> values;
    for (std::size_t q = 0; q < Q.size(); ++q) values.push_back(Pmod(deg(q)));
    std::vector<std::vector<Matrix<F>>> qmaps;
    for (const auto& ar : Q.arrows()) {
      const int j = deg(ar.src);
      std::vector<Matrix<F>> ms;
      for (std::size_t v = 0; v < nA; ++v) {
        if (dP.count(j) && P.count(j - 1))
          ms.push_back(dP.at(j)[v]);
        else
          ms.emplace_back(f, values[ar.tgt]->dim(v), values[ar.src]->dim(v));
      }
      qmaps.push_back(std::move(ms));
    }
    auto obj = qa_.assemble(values, qmaps);
    RepMorphism<F> m = zero_morphism(obj, x);
    for (std::size_t q = 0; q < Q.size(); ++q)
      if (phi.count(deg(q)))
        for (std::size_t v = 0; v < nA; ++v) m.comps[qa_.obj(q, v)] = phi.at(deg(q))[v];
    if (m.naturality_error()) throw std::logic_error("resolution map is not natural");
    return {obj, m, certify_semiprojective(obj), P.count(top) > 0};
  }

  const QA<F>& qa_;
  SerreData<F> sd_;
  Homology<F> hom_;
};

}  // namespace qshape
