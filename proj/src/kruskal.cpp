#include "ntf/kruskal.hpp"

#include <fstream>
#include <stdexcept>

namespace ntf {

KruskalModel::KruskalModel(std::vector<Eigen::MatrixXd> f) : factors(std::move(f)) {
  validate();
}

void KruskalModel::validate() const {
  if (factors.empty()) throw std::invalid_argument("model must have at least one factor");
  const Eigen::Index r = factors[0].cols();
  for (const auto& a : factors)
    if (a.cols() != r) throw std::invalid_argument("factor column counts disagree");
}

std::vector<int> KruskalModel::shape() const {
  std::vector<int> s(factors.size());
  for (std::size_t i = 0; i < factors.size(); ++i) s[i] = static_cast<int>(factors[i].rows());
  return s;
}

bool KruskalModel::matches_shape(const std::vector<int>& tensor_shape) const {
  return shape() == tensor_shape;
}

bool KruskalModel::is_nonnegative() const {
  for (const auto& a : factors)
    if ((a.array() < 0.0).any()) return false;
  return true;
}

void KruskalModel::save_text(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.precision(17);
  out << factors.size() << ' ' << rank() << '\n';
  for (const auto& a : factors) {
    out << a.rows() << '\n';
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j) out << a(i, j) << (j + 1 == a.cols() ? '\n' : ' ');
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

KruskalModel KruskalModel::load_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  int n = 0, r = 0;
  in >> n >> r;
  if (!in || n < 1 || r < 1) throw std::runtime_error(path + ": bad header");
  KruskalModel m;
  m.factors.resize(static_cast<std::size_t>(n));
  for (auto& a : m.factors) {
    int rows = 0;
    in >> rows;
    if (!in || rows < 1) throw std::runtime_error(path + ": bad factor header");
    a.resize(rows, r);
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      for (Eigen::Index j = 0; j < a.cols(); ++j) in >> a(i, j);
  }
  if (!in) throw std::runtime_error(path + ": truncated factors");
  return m;
}

}  // namespace ntf
