#include "mpeckit/multipliers.hpp"

#include <algorithm>

#include "mpeckit/error.hpp"

namespace mpeckit {

MultiplierPolytope multiplier_set(const MpecInstance& inst, const Point& p) {
  const LocalModel lm = local_model(inst, p);
  for (std::size_t i = 0; i < inst.ell(); ++i) {
    if (lm.g[i].sign() > 0) {
      throw Error(ErrorKind::InfeasiblePoint,
                  "g_" + std::to_string(i + 1) + " = " + lm.g[i].to_string() +
                      " > 0 at the given point");
    }
  }
  const std::size_t ell = inst.ell();
  MultiplierPolytope mp;
  mp.ell = ell;
  mp.active = lm.active;
  mp.h_form = HPolyhedron(ell);
  for (std::size_t i = 0; i < ell; ++i) mp.h_form.add_inequality(-unit_vector(ell, i), 0);
  for (std::size_t j = 0; j < inst.m(); ++j) mp.h_form.add_equality(lm.Gy.col(j), -lm.F[j]);
  for (std::size_t i = 0; i < ell; ++i) {
    if (!std::binary_search(lm.active.begin(), lm.active.end(), i)) {
      mp.h_form.add_equality(unit_vector(ell, i), 0);
    }
  }
  try {
    mp.vertices = vertex_enumeration(mp.h_form);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::UnboundedPolytope) throw;
    mp.bounded = false;
  }
  return mp;
}

IndexSet support(const Vector& lambda) {
  IndexSet s;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (!lambda[i].is_zero()) s.push_back(i);
  }
  return s;
}

std::vector<IndexSet> subsets_by_size(const IndexSet& base) {
  std::vector<IndexSet> out;
  const std::size_t k = base.size();
  for (std::size_t size = 0; size <= k; ++size) {
    std::vector<bool> pick(k, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(size), true);
    do {
      IndexSet s;
      for (std::size_t i = 0; i < k; ++i) {
        if (pick[i]) s.push_back(base[i]);
      }
      out.push_back(std::move(s));
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return out;
}

ScocFamily scoc_family(const MpecInstance& inst, const Point& p,
                       const MultiplierPolytope& mset) {
  if (!mset.bounded) {
    throw Error(ErrorKind::UnboundedMultiplierSet,
                "multiplier set is unbounded (MFCQ fails)");
  }
  if (mset.vertices.empty()) {
    throw Error(ErrorKind::EmptyMultiplierSet, "the point admits no multiplier");
  }
  const LocalModel lm = local_model(inst, p);
  ScocFamily fam;
  for (const IndexSet& j : subsets_by_size(mset.active)) {
    if (rank_of(lm.Gy.select_rows(j)) != j.size()) continue;
    for (const Vector& v : mset.vertices) {
      const IndexSet s = support(v);
      if (std::includes(j.begin(), j.end(), s.begin(), s.end())) {
        fam.sets.push_back(j);
        fam.witnesses.push_back(v);
        break;
      }
    }
  }
  return fam;
}

}  // namespace mpeckit
