#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ntf/kernels.hpp"
#include "ntf/provider.hpp"

namespace ntf {

/// Core tensor contracted with one orthonormal basis per mode. Used as
/// lossless-or-lossy compression: the solvers consume it through
/// TuckerProvider without ever expanding the full tensor.
struct TuckerFormat {
  DenseTensor core;                    // r_1 x ... x r_N
  std::vector<Eigen::MatrixXd> bases;  // I_p x r_p, orthonormal columns

  std::vector<int> full_shape() const;
  std::vector<int> ranks() const { return core.shape(); }

  /// Throws unless the core shape matches the basis column counts and
  /// every basis has orthonormal columns (within 1e-10).
  void validate() const;

  // Same container conventions as DenseTensor files, with the rank list
  // added to the header and the bases appended after the core payload.
  void save(const std::string& path) const;
  void save_text(const std::string& path) const;
  static TuckerFormat load(const std::string& path);
  static TuckerFormat load_text(const std::string& path);
};

/// Mode-`mode` contraction with a matrix: replaces I_mode by m.rows().
DenseTensor ttm(const DenseTensor& t, const Eigen::MatrixXd& m, int mode);

/// Truncated higher-order SVD: per-mode left singular vectors of the
/// unfolding (one pass, no refinement), core = t contracted with every
/// basis transpose. With ranks equal to the shape the format is lossless.
TuckerFormat hosvd_compress(const DenseTensor& t, const std::vector<int>& ranks);

/// Dense tensor represented by the format (for tests and export).
DenseTensor expand(const TuckerFormat& fmt);

/// MTTKRP computed inside the compressed space:
///   U_i * core_[i] * khatri_rao of (U_l^T A_l), never touching the
/// full tensor; intermediates stay at most max(I_p, prod r_p) sized.
Eigen::MatrixXd compressed_mttkrp(const TuckerFormat& fmt, const KruskalModel& m, int mode);

/// A * hadamard_of_grams - compressed MTTKRP.
Eigen::MatrixXd compressed_gradient(const TuckerFormat& fmt, const KruskalModel& m, int mode,
                                    const GramCache& cache);

/// Objective against the compressed representation (pivot-mode formula
/// with the core norm as the constant term).
double compressed_objective(const TuckerFormat& fmt, const KruskalModel& m,
                            const GramCache& cache);

/// Plugs a Tucker format into the solver drivers.
class TuckerProvider final : public ObjectiveProvider {
 public:
  explicit TuckerProvider(const TuckerFormat& fmt);

  std::vector<int> shape() const override { return fmt_->full_shape(); }
  double norm_sq() const override { return norm_sq_; }
  Eigen::MatrixXd mttkrp(const KruskalModel& m, int mode) const override {
    return compressed_mttkrp(*fmt_, m, mode);
  }

 private:
  const TuckerFormat* fmt_;
  double norm_sq_;
};

}  // namespace ntf
