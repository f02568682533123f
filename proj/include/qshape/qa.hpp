#pragma once

// Representations of Q with values in A-modules, realized as representations
// of the tensor category T = Q (x) A. Object (q, v) of T has index q*|A| + v;
// Q-arrow a at vertex v has index a*|A| + v and A-arrow al at q follows all
// Q-arrows. Q-action matrices commute with A-action matrices.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qshape/quiver.hpp"
#include "qshape/rep.hpp"
#include "qshape/serialize.hpp"
#include "qshape/setup.hpp"

namespace qshape {

/// A finite bound quiver algebra, or the ground field (one vertex, no arrows).
inline QuiverSpec field_algebra() { return QuiverSpec::point(); }

/// k[x]/(x^2) as a one-loop bound quiver.
inline QuiverSpec dual_numbers() {
  QuiverSpec s;
  s.objects = {"1"};
  s.arrows = {{"x", "1", "1"}};
  s.relations = {Scheme{{1, {"x", "x"}}}};
  s.relations_given = true;
  return s;
}

template <class F>
class QA {
 public:
  using Cat = KCategory<F>;
  using CatPtr = std::shared_ptr<const Cat>;

  QA(CatPtr q, CatPtr a) : Q_(std::move(q)), A_(std::move(a)), T_(Cat::product(*Q_, *A_)) {
    if (!A_->nilpotence().ok) throw AdmissibilityError("coefficient algebra relations are not nilpotent");
    for (std::size_t p = 0; p < A_->size(); ++p)
      if (A_->open_in(p) || A_->open_out(p)) throw AdmissibilityError("coefficient algebra must be finite");
  }

  static QA over_field(CatPtr q) {
    return QA(q, build_category(q->field(), field_algebra()));
  }

  const F& field() const { return Q_->field(); }
  const Cat& Q() const { return *Q_; }
  const Cat& A() const { return *A_; }
  const Cat& T() const { return *T_; }
  const CatPtr& Q_ptr() const { return Q_; }
  const CatPtr& A_ptr() const { return A_; }
  const CatPtr& T_ptr() const { return T_; }

  std::size_t nA() const { return A_->size(); }
  std::size_t obj(std::size_t q, std::size_t v) const { return q * nA() + v; }
  std::size_t q_of(std::size_t t) const { return t / nA(); }
  std::size_t v_of(std::size_t t) const { return t % nA(); }
  std::size_t q_arrow(std::size_t a, std::size_t v) const { return a * nA() + v; }
  std::size_t a_arrow(std::size_t q, std::size_t al) const {
    return Q_->arrows().size() * nA() + q * A_->arrows().size() + al;
  }
  bool semisimple() const { return A_->arrows().empty(); }

  /// Q-basis element i of Q(p,q) as a basis index of T((p,v),(q,v)).
  std::size_t lift_index(std::size_t, std::size_t, std::size_t v, std::size_t i) const {
    return i * A_->dim(v, v);
  }

  /// X_v(f) for basis element i of Q(p,q), on the A-vertex v layer.
  Matrix<F> eval_q(const Representation<F>& x, std::size_t p, std::size_t q, std::size_t v, std::size_t i) const {
    return x.eval(obj(p, v), obj(q, v), lift_index(p, q, v, i));
  }
  Matrix<F> eval_q(const Representation<F>& x, std::size_t p, std::size_t q, std::size_t v, const Vec<F>& f) const {
    Matrix<F> m(field(), x.dim(obj(q, v)), x.dim(obj(p, v)));
    if (m.empty()) return m;
    for (std::size_t i = 0; i < f.size(); ++i)
      if (!is_zero(f[i])) m += eval_q(x, p, q, v, i).scaled(f[i]);
    return m;
  }
  /// X_v along a path of Q-arrows (diagrammatic order).
  Matrix<F> eval_q_path(const Representation<F>& x, std::size_t from, std::size_t v,
                        const std::vector<std::size_t>& path) const {
    std::vector<std::size_t> tp;
    for (auto a : path) tp.push_back(q_arrow(a, v));
    return x.eval_path(obj(from, v), tp);
  }

  std::size_t dim_at(const Representation<F>& x, std::size_t q) const {
    std::size_t s = 0;
    for (std::size_t v = 0; v < nA(); ++v) s += x.dim(obj(q, v));
    return s;
  }
  /// Objects of Q where X is nonzero.
  std::vector<std::size_t> q_support(const Representation<F>& x) const {
    std::vector<std::size_t> s;
    for (std::size_t q = 0; q < Q_->size(); ++q)
      if (dim_at(x, q) > 0) s.push_back(q);
    return s;
  }

  /// The A-module X(q).
  RepPtr<F> value(const Representation<F>& x, std::size_t q) const {
    std::vector<std::size_t> dims;
    for (std::size_t v = 0; v < nA(); ++v) dims.push_back(x.dim(obj(q, v)));
    std::vector<Matrix<F>> maps;
    for (std::size_t al = 0; al < A_->arrows().size(); ++al) maps.push_back(x.map(a_arrow(q, al)));
    return std::make_shared<const Representation<F>>(A_, dims, std::move(maps));
  }

  /// The A-linear map X(q) -> X(q') of a Q-arrow, as an A-module morphism.
  RepMorphism<F> q_arrow_map(RepPtr<F> x, std::size_t a) const {
    const auto& ar = Q_->arrows()[a];
    RepMorphism<F> m{value(*x, ar.src), value(*x, ar.tgt), {}};
    for (std::size_t v = 0; v < nA(); ++v) m.comps.push_back(x->map(q_arrow(a, v)));
    return m;
  }

  /// Assemble a T-representation from A-modules per Q-object and A-linear
  /// maps (one matrix per A-vertex) per Q-arrow.
  RepPtr<F> assemble(const std::vector<RepPtr<F>>& values, const std::vector<std::vector<Matrix<F>>>& qmaps) const {
    std::vector<std::size_t> dims(T_->size());
    for (std::size_t q = 0; q < Q_->size(); ++q)
      for (std::size_t v = 0; v < nA(); ++v) dims[obj(q, v)] = values[q]->dim(v);
    std::vector<Matrix<F>> maps(T_->arrows().size());
    for (std::size_t a = 0; a < Q_->arrows().size(); ++a)
      for (std::size_t v = 0; v < nA(); ++v) maps[q_arrow(a, v)] = qmaps[a][v];
    for (std::size_t q = 0; q < Q_->size(); ++q)
      for (std::size_t al = 0; al < A_->arrows().size(); ++al) maps[a_arrow(q, al)] = values[q]->map(al);
    return make_rep(T_, dims, std::move(maps));
  }

  /// The zero A-module and free A-modules.
  RepPtr<F> zero_module() const { return std::make_shared<const Representation<F>>(Representation<F>::zero(A_)); }
  RepPtr<F> vector_space(std::size_t n) const {
    if (!semisimple() || nA() != 1) throw std::invalid_argument("vector_space: A is not the ground field");
    return std::make_shared<const Representation<F>>(A_, std::vector<std::size_t>{n}, std::vector<Matrix<F>>{});
  }
  RepPtr<F> regular_module() const {
    std::vector<std::size_t> all;
    for (std::size_t v = 0; v < nA(); ++v) all.push_back(v);
    return free_rep(A_, all);
  }

  /// Q(q,-) (x) M: value Q(q,p) (x) M(v) at (p,v) with index a*dim M(v) + m.
  RepPtr<F> induce(std::size_t q, RepPtr<F> M) const {
    const auto nq = Q_->size();
    std::vector<std::size_t> dims(T_->size());
    for (std::size_t p = 0; p < nq; ++p)
      for (std::size_t v = 0; v < nA(); ++v) dims[obj(p, v)] = Q_->dim(q, p) * M->dim(v);
    auto P = representable(Q_, q);
    std::vector<Matrix<F>> maps(T_->arrows().size());
    for (std::size_t a = 0; a < Q_->arrows().size(); ++a)
      for (std::size_t v = 0; v < nA(); ++v)
        maps[q_arrow(a, v)] = Matrix<F>::kronecker(P->map(a), Matrix<F>::identity(field(), M->dim(v)));
    for (std::size_t p = 0; p < nq; ++p)
      for (std::size_t al = 0; al < A_->arrows().size(); ++al)
        maps[a_arrow(p, al)] = Matrix<F>::kronecker(Matrix<F>::identity(field(), Q_->dim(q, p)), M->map(al));
    return std::make_shared<const Representation<F>>(T_, dims, std::move(maps));
  }

  /// S<q> (x) M: value M at q, zero elsewhere.
  RepPtr<F> stalk(std::size_t q, RepPtr<F> M) const {
    std::vector<std::size_t> dims(T_->size(), 0);
    for (std::size_t v = 0; v < nA(); ++v) dims[obj(q, v)] = M->dim(v);
    std::vector<Matrix<F>> maps;
    for (std::size_t a = 0; a < T_->arrows().size(); ++a) {
      const auto& ar = T_->arrows()[a];
      maps.emplace_back(field(), dims[ar.tgt], dims[ar.src]);
    }
    for (std::size_t al = 0; al < A_->arrows().size(); ++al) maps[a_arrow(q, al)] = M->map(al);
    return std::make_shared<const Representation<F>>(T_, dims, std::move(maps));
  }
  RepPtr<F> stalk(std::size_t q, std::size_t n = 1) const { return stalk(q, vector_space(n)); }

  /// Q(q,-) (x) M with M projective over A.
  RepPtr<F> proj_rep(std::size_t q, RepPtr<F> M) const {
    if (!is_projective(M)) throw std::invalid_argument("proj_rep: coefficient module is not projective over A");
    if (!Q_->out_complete(q)) throw WindowError("proj_rep at " + Q_->label(q) + " is cut off; pad the window below it");
    return induce(q, M);
  }
  RepPtr<F> proj_rep(std::size_t q, std::size_t n = 1) const { return proj_rep(q, vector_space(n)); }

  /// D Q(-,q) (x) M, rewritten through the Serre functor as Q(S^-1 q, -) (x) M.
  RepPtr<F> inj_rep(const SerreData<F>& sd, std::size_t q, RepPtr<F> M) const {
    if (!is_injective(M)) throw std::invalid_argument("inj_rep: coefficient module is not injective over A");
    auto src = sd.inverse(q);
    if (!src) throw WindowError("inj_rep: " + Q_->label(q) + " is not in the image of the Serre map on this window");
    return induce(*src, M);
  }
  RepPtr<F> inj_rep(const SerreData<F>& sd, std::size_t q, std::size_t n = 1) const {
    return inj_rep(sd, q, vector_space(n));
  }

  /// Yoneda: Hom_T(Q(q,-) (x) M, X) -> Hom_A(M, X(q)), psi -> psi_q on id (x) M.
  RepMorphism<F> yoneda_forward(std::size_t q, RepPtr<F> M, const RepMorphism<F>& psi) const {
    RepMorphism<F> h{M, value(*psi.target, q), {}};
    for (std::size_t v = 0; v < nA(); ++v)
      h.comps.push_back(psi.comps[obj(q, v)].block(0, 0, psi.target->dim(obj(q, v)), M->dim(v)));
    return h;
  }

  /// Inverse: h -> (f (x) m -> X(f) h(m)).
  RepMorphism<F> yoneda_inverse(std::size_t q, RepPtr<F> M, RepPtr<F> x, const RepMorphism<F>& h) const {
    auto P = induce(q, M);
    RepMorphism<F> psi = zero_morphism<F>(P, x);
    for (std::size_t p = 0; p < Q_->size(); ++p)
      for (std::size_t v = 0; v < nA(); ++v) {
        const auto t = obj(p, v);
        if (x->dim(t) == 0 || M->dim(v) == 0) continue;
        for (std::size_t a = 0; a < Q_->dim(q, p); ++a) {
          auto img = eval_q(*x, q, p, v, a) * h.comps[v];
          for (std::size_t m = 0; m < M->dim(v); ++m)
            for (std::size_t i = 0; i < img.rows(); ++i) psi.comps[t](i, a * M->dim(v) + m) = img(i, m);
        }
      }
    return psi;
  }

  /// Block-diagonal matrix of a Q-arrow over all A-vertices.
  Matrix<F> q_arrow_matrix(const Representation<F>& x, std::size_t a) const {
    std::vector<Matrix<F>> blocks;
    for (std::size_t v = 0; v < nA(); ++v) blocks.push_back(x.map(q_arrow(a, v)));
    return Matrix<F>::block_diagonal(field(), blocks);
  }

  Json module_to_json(const Representation<F>& m) const {
    Json j;
    j["dims"] = m.dims();
    Json ar = Json::object();
    for (std::size_t al = 0; al < A_->arrows().size(); ++al) ar[A_->arrows()[al].label] = matrix_to_json(m.map(al));
    j["arrows"] = std::move(ar);
    return j;
  }

  RepPtr<F> module_from_json(const Json& j) const {
    auto dims = j.at("dims").get<std::vector<std::size_t>>();
    if (dims.size() != nA()) throw DimensionError("module: expected " + std::to_string(nA()) + " vertex dimensions");
    std::vector<Matrix<F>> maps;
    for (const auto& ar : A_->arrows()) {
      if (j.contains("arrows") && j["arrows"].contains(ar.label))
        maps.push_back(matrix_from_json(field(), j["arrows"][ar.label]));
      else
        maps.emplace_back(field(), dims[ar.tgt], dims[ar.src]);
    }
    return make_rep(A_, dims, std::move(maps));
  }

  /// {"support":[...], "values":{q: module}, "arrows":{name: matrix}}; arrows
  /// touching the support only, block-diagonal over A-vertices.
  Json to_json(const Representation<F>& x) const {
    Json j;
    auto supp = q_support(x);
    Json s = Json::array(), vals = Json::object(), arr = Json::object();
    for (auto q : supp) {
      s.push_back(Q_->label(q));
      vals[Q_->label(q)] = module_to_json(*value(x, q));
    }
    for (std::size_t a = 0; a < Q_->arrows().size(); ++a) {
      const auto& ar = Q_->arrows()[a];
      if (dim_at(x, ar.src) && dim_at(x, ar.tgt)) arr[ar.label] = matrix_to_json(q_arrow_matrix(x, a));
    }
    j["support"] = std::move(s);
    j["values"] = std::move(vals);
    j["arrows"] = std::move(arr);
    return j;
  }

  RepPtr<F> from_json(const Json& j) const {
    std::vector<RepPtr<F>> values(Q_->size(), zero_module());
    for (const auto& [label, m] : j.at("values").items()) {
      auto q = Q_->find(label);
      if (!q) throw WindowError("object " + label + " is outside the window");
      values[*q] = module_from_json(m);
    }
    std::vector<std::vector<Matrix<F>>> qmaps(Q_->arrows().size());
    for (std::size_t a = 0; a < Q_->arrows().size(); ++a) {
      const auto& ar = Q_->arrows()[a];
      const auto* src = values[ar.src].get();
      const auto* tgt = values[ar.tgt].get();
      std::optional<Matrix<F>> full;
      if (j.contains("arrows") && j["arrows"].contains(ar.label)) full = matrix_from_json(field(), j["arrows"][ar.label]);
      if (full && (full->rows() != tgt->total_dim() || full->cols() != src->total_dim()))
        throw DimensionError("arrow " + ar.label + " has the wrong shape");
      std::size_t r0 = 0, c0 = 0;
      for (std::size_t v = 0; v < nA(); ++v) {
        const auto nr = tgt->dim(v), nc = src->dim(v);
        qmaps[a].push_back(full ? full->block(r0, c0, nr, nc) : Matrix<F>(field(), nr, nc));
        r0 += nr;
        c0 += nc;
      }
      if (full && q_arrow_matrix_from(qmaps[a]) != *full)
        throw DimensionError("arrow " + ar.label + " mixes A-vertices");
    }
    return assemble(values, qmaps);
  }

  /// {"components":{q: matrix}} over the union of supports.
  Json morphism_to_json(const RepMorphism<F>& f) const {
    Json c = Json::object();
    for (std::size_t q = 0; q < Q_->size(); ++q) {
      if (!dim_at(*f.source, q) && !dim_at(*f.target, q)) continue;
      std::vector<Matrix<F>> blocks;
      for (std::size_t v = 0; v < nA(); ++v) blocks.push_back(f.comps[obj(q, v)]);
      c[Q_->label(q)] = matrix_to_json(Matrix<F>::block_diagonal(field(), blocks));
    }
    Json j;
    j["components"] = std::move(c);
    return j;
  }

  RepMorphism<F> morphism_from_json(const Json& j, RepPtr<F> x, RepPtr<F> y) const {
    auto f = zero_morphism<F>(x, y);
    for (const auto& [label, m] : j.at("components").items()) {
      auto q = Q_->find(label);
      if (!q) throw WindowError("object " + label + " is outside the window");
      auto full = matrix_from_json(field(), m);
      if (full.rows() != dim_at(*y, *q) || full.cols() != dim_at(*x, *q))
        throw DimensionError("component at " + label + " has the wrong shape");
      std::size_t r0 = 0, c0 = 0;
      for (std::size_t v = 0; v < nA(); ++v) {
        f.comps[obj(*q, v)] = full.block(r0, c0, y->dim(obj(*q, v)), x->dim(obj(*q, v)));
        r0 += y->dim(obj(*q, v));
        c0 += x->dim(obj(*q, v));
      }
    }
    if (auto e = f.naturality_error()) throw RelationError(*e);
    return f;
  }

 private:
  Matrix<F> q_arrow_matrix_from(const std::vector<Matrix<F>>& blocks) const {
    return Matrix<F>::block_diagonal(field(), blocks);
  }

  CatPtr Q_, A_, T_;
};

}  // namespace qshape
