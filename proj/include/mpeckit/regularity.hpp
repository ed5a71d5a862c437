#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mpeckit/multipliers.hpp"

namespace mpeckit {

struct MfcqVerdict {
  bool holds = false;
  Vector v;    // certificate direction, |v|_inf <= 1
  Rational t;  // margin: grad_y g_i^T v <= -t on the active set
};

struct LicqVerdict {
  bool holds = false;
  std::size_t rank = 0;
  std::size_t active_count = 0;
};

struct CrcqVerdict {
  bool falsified = false;
  std::size_t sample_count = 0;
  // Witness when falsified.
  IndexSet J;
  Vector reference_point, sample_point;
  std::size_t reference_rank = 0, sample_rank = 0;
};

struct ScocMatrix {
  IndexSet J;
  Vector witness;
  Matrix a;
  int det_sign = 0;
};

struct ScocVerdict {
  bool holds = false;
  int sign = 0;
  std::vector<ScocMatrix> matrices;
  std::string reason;            // why it fails
  std::optional<IndexSet> offending;
};

struct ReducedScocVerdict {
  bool applicable = false;
  std::string reason;  // when not applicable
  Matrix reduced;      // U^T grad_y L U
  int det_sign = 0;
  bool nonsingular = false;
};

struct CqReport {
  MfcqVerdict mfcq;
  LicqVerdict licq;
  CrcqVerdict crcq;
  bool convexity_warning = false;
};

MfcqVerdict check_mfcq(const MpecInstance& inst, const Point& p);
LicqVerdict check_licq(const MpecInstance& inst, const Point& p);
CrcqVerdict check_crcq_sampled(const MpecInstance& inst, const Point& p,
                               const Rational& radius = Rational(1, 8),
                               std::size_t samples_per_axis = 5);

// A_J = [[grad_y L(lambda), Gy_J^T], [-Gy_J, 0]].
Matrix scoc_matrix(const LocalModel& lm, const IndexSet& J, const Vector& lambda);

ScocVerdict check_scoc(const MpecInstance& inst, const Point& p);
ReducedScocVerdict check_scoc_reduced(const MpecInstance& inst, const Point& p);

// True when some g_i has a y-Hessian that is not positive semidefinite.
bool convexity_warning(const MpecInstance& inst);

CqReport check_cq(const MpecInstance& inst, const Point& p,
                  const Rational& crcq_radius = Rational(1, 8),
                  std::size_t crcq_samples = 5);

}  // namespace mpeckit
