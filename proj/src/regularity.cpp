#include "mpeckit/regularity.hpp"

#include <algorithm>

#include "mpeckit/error.hpp"

namespace mpeckit {

MfcqVerdict check_mfcq(const MpecInstance& inst, const Point& p) {
  const LocalModel lm = local_model(inst, p);
  const std::size_t m = inst.m();
  MfcqVerdict out;
  if (lm.active.empty()) {
    out.holds = true;
    out.v = zeros(m);
    out.t = 1;
    return out;
  }
  // Variables (v, t).
  HPolyhedron lp(m + 1);
  for (std::size_t i : lm.active) {
    Vector row = lm.Gy.row(i);
    row.push_back(1);
    lp.add_inequality(row, 0);
  }
  for (std::size_t j = 0; j < m; ++j) {
    lp.add_inequality(unit_vector(m + 1, j), 1);
    lp.add_inequality(-unit_vector(m + 1, j), 1);
  }
  lp.add_inequality(-unit_vector(m + 1, m), 0);
  const LpResult r = lp_solve(unit_vector(m + 1, m), lp, Sense::Maximize);
  const auto& opt = std::get<LpOptimal>(r);
  out.t = opt.value;
  out.v = Vector(opt.point.begin(), opt.point.begin() + static_cast<std::ptrdiff_t>(m));
  out.holds = out.t.sign() > 0;
  return out;
}

LicqVerdict check_licq(const MpecInstance& inst, const Point& p) {
  const LocalModel lm = local_model(inst, p);
  LicqVerdict out;
  out.active_count = lm.active.size();
  out.rank = rank_of(lm.Gy.select_rows(lm.active));
  out.holds = out.rank == out.active_count;
  return out;
}

CrcqVerdict check_crcq_sampled(const MpecInstance& inst, const Point& p,
                               const Rational& radius,
                               std::size_t samples_per_axis) {
  if (samples_per_axis == 0) {
    throw Error(ErrorKind::InvalidArgument, "CRCQ sampler needs at least one sample per axis");
  }
  if (radius.sign() < 0) {
    throw Error(ErrorKind::InvalidArgument, "CRCQ radius must be nonnegative");
  }
  const LocalModel lm = local_model(inst, p);
  const std::size_t n = inst.n(), m = inst.m();
  const std::size_t dim = n + m;
  const Vector zbar = p.z();

  // grad_y g_i as polynomials; constant gradients cannot change rank.
  std::vector<std::vector<Polynomial>> grads(inst.ell());
  std::vector<bool> constant(inst.ell(), true);
  for (std::size_t i = 0; i < inst.ell(); ++i) {
    for (std::size_t a = 0; a < m; ++a) {
      grads[i].push_back(inst.g()[i].derivative(n + a));
      if (!grads[i].back().is_constant()) constant[i] = false;
    }
  }
  auto gradient_rank = [&](const IndexSet& J, const Vector& z) {
    Matrix g(0, m);
    for (std::size_t i : J) {
      Vector row(m);
      for (std::size_t a = 0; a < m; ++a) row[a] = grads[i][a].evaluate(z);
      g.append_row(row);
    }
    return rank_of(g);
  };

  std::vector<Rational> offsets;
  if (samples_per_axis == 1) {
    offsets.push_back(0);
  } else {
    const Rational denom(static_cast<long>(samples_per_axis - 1));
    for (std::size_t s = 0; s < samples_per_axis; ++s) {
      offsets.push_back(radius * (Rational(-1) + Rational(2 * static_cast<long>(s)) / denom));
    }
  }
  std::vector<Vector> samples;
  std::vector<std::size_t> idx(dim, 0);
  for (;;) {
    Vector z = zbar;
    for (std::size_t k = 0; k < dim; ++k) z[k] += offsets[idx[k]];
    samples.push_back(std::move(z));
    std::size_t k = dim;
    while (k > 0 && idx[k - 1] + 1 == offsets.size()) idx[--k] = 0;
    if (k == 0) break;
    ++idx[k - 1];
  }

  CrcqVerdict out;
  out.sample_count = samples.size();
  for (const IndexSet& J : subsets_by_size(lm.active)) {
    if (std::all_of(J.begin(), J.end(), [&](std::size_t i) { return constant[i]; })) {
      continue;
    }
    const std::size_t ref = gradient_rank(J, zbar);
    for (const auto& z : samples) {
      const std::size_t r = gradient_rank(J, z);
      if (r != ref) {
        out.falsified = true;
        out.J = J;
        out.reference_point = zbar;
        out.sample_point = z;
        out.reference_rank = ref;
        out.sample_rank = r;
        return out;
      }
    }
  }
  return out;
}

Matrix scoc_matrix(const LocalModel& lm, const IndexSet& J, const Vector& lambda) {
  const std::size_t m = lm.Fy.rows();
  const std::size_t k = J.size();
  const Matrix L = lm.grad_y_lagrangian(lambda);
  Matrix a(m + k, m + k);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < m; ++c) a(r, c) = L(r, c);
  }
  for (std::size_t t = 0; t < k; ++t) {
    for (std::size_t c = 0; c < m; ++c) {
      a(c, m + t) = lm.Gy(J[t], c);
      a(m + t, c) = -lm.Gy(J[t], c);
    }
  }
  return a;
}

ScocVerdict check_scoc(const MpecInstance& inst, const Point& p) {
  const MultiplierPolytope mset = multiplier_set(inst, p);
  const ScocFamily fam = scoc_family(inst, p, mset);
  const LocalModel lm = local_model(inst, p);
  ScocVerdict out;
  for (std::size_t t = 0; t < fam.sets.size(); ++t) {
    ScocMatrix sm;
    sm.J = fam.sets[t];
    sm.witness = fam.witnesses[t];
    sm.a = scoc_matrix(lm, sm.J, sm.witness);
    sm.det_sign = det_sign(sm.a);
    out.matrices.push_back(std::move(sm));
  }
  out.holds = true;
  for (const auto& sm : out.matrices) {
    if (sm.det_sign == 0) {
      out.holds = false;
      out.reason = "zero determinant";
      out.offending = sm.J;
      break;
    }
    if (out.sign == 0) {
      out.sign = sm.det_sign;
    } else if (sm.det_sign != out.sign) {
      out.holds = false;
      out.reason = "determinant sign clash";
      out.offending = sm.J;
      break;
    }
  }
  if (!out.holds) out.sign = 0;
  return out;
}

ReducedScocVerdict check_scoc_reduced(const MpecInstance& inst, const Point& p) {
  ReducedScocVerdict out;
  if (!check_licq(inst, p).holds) {
    out.reason = "LICQ fails";
    return out;
  }
  const MultiplierPolytope mset = multiplier_set(inst, p);
  if (mset.vertices.size() != 1) {
    out.reason = "no multiplier";
    return out;
  }
  const Vector& lambda = mset.vertices.front();
  for (std::size_t i : mset.active) {
    if (lambda[i].sign() <= 0) {
      out.reason = "multiplier of active constraint " + std::to_string(i + 1) +
                   " is not positive";
      return out;
    }
  }
  const LocalModel lm = local_model(inst, p);
  const std::size_t m = inst.m();
  const auto basis = null_space(lm.Gy.select_rows(lm.active), m);
  const std::size_t r = basis.size();
  Matrix u(m, r);
  for (std::size_t c = 0; c < r; ++c) {
    for (std::size_t j = 0; j < m; ++j) u(j, c) = basis[c][j];
  }
  out.applicable = true;
  out.reduced = u.transpose() * lm.grad_y_lagrangian(lambda) * u;
  out.det_sign = det_sign(out.reduced);
  out.nonsingular = out.det_sign != 0;
  return out;
}

bool convexity_warning(const MpecInstance& inst) {
  const std::size_t n = inst.n(), m = inst.m();
  for (const auto& g : inst.g()) {
    const Matrix h = constant_hessian(g);
    Matrix hyy(m, m);
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) hyy(a, b) = h(n + a, n + b);
    }
    if (!is_psd(hyy)) return true;
  }
  return false;
}

CqReport check_cq(const MpecInstance& inst, const Point& p,
                  const Rational& crcq_radius, std::size_t crcq_samples) {
  CqReport rep;
  rep.mfcq = check_mfcq(inst, p);
  rep.licq = check_licq(inst, p);
  rep.crcq = check_crcq_sampled(inst, p, crcq_radius, crcq_samples);
  rep.convexity_warning = convexity_warning(inst);
  return rep;
}

}  // namespace mpeckit
