#include "ntf/provider.hpp"

#include "ntf/kernels.hpp"

namespace ntf {

DenseProvider::DenseProvider(const DenseTensor& t) : tensor_(&t), norm_sq_(t.norm_sq()) {}

Eigen::MatrixXd DenseProvider::mttkrp(const KruskalModel& m, int mode) const {
  return ntf::mttkrp(*tensor_, m, mode);
}

}  // namespace ntf
