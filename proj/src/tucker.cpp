#include "ntf/tucker.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace ntf {

std::vector<int> TuckerFormat::full_shape() const {
  std::vector<int> s(bases.size());
  for (std::size_t p = 0; p < bases.size(); ++p) s[p] = static_cast<int>(bases[p].rows());
  return s;
}

void TuckerFormat::validate() const {
  if (static_cast<int>(bases.size()) != core.order())
    throw std::invalid_argument("basis count does not match the core order");
  for (std::size_t p = 0; p < bases.size(); ++p) {
    if (static_cast<int>(bases[p].cols()) != core.dim(static_cast<int>(p)))
      throw std::invalid_argument("basis column count does not match the core shape");
    const Eigen::MatrixXd gram = bases[p].transpose() * bases[p];
    const double defect =
        (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    if (defect > 1e-10) throw std::invalid_argument("basis columns are not orthonormal");
  }
}

DenseTensor ttm(const DenseTensor& t, const Eigen::MatrixXd& m, int mode) {
  if (m.cols() != t.dim(mode)) throw std::invalid_argument("ttm: dimension mismatch");
  std::vector<int> out_shape = t.shape();
  out_shape[static_cast<std::size_t>(mode)] = static_cast<int>(m.rows());
  return fold(m * unfold(t, mode), mode, out_shape);
}

TuckerFormat hosvd_compress(const DenseTensor& t, const std::vector<int>& ranks) {
  const int n = t.order();
  if (static_cast<int>(ranks.size()) != n)
    throw std::invalid_argument("hosvd: rank list length does not match the order");
  for (int p = 0; p < n; ++p)
    if (ranks[static_cast<std::size_t>(p)] < 1 || ranks[static_cast<std::size_t>(p)] > t.dim(p))
      throw std::invalid_argument("hosvd: rank outside [1, dimension]");

  TuckerFormat fmt;
  fmt.bases.reserve(static_cast<std::size_t>(n));
  for (int p = 0; p < n; ++p) {
    // Full U so a requested rank may exceed the unfolding's column count.
    Eigen::BDCSVD<Eigen::MatrixXd> svd(unfold(t, p), Eigen::ComputeFullU);
    fmt.bases.push_back(svd.matrixU().leftCols(ranks[static_cast<std::size_t>(p)]));
  }
  fmt.core = t;
  for (int p = 0; p < n; ++p)
    fmt.core = ttm(fmt.core, fmt.bases[static_cast<std::size_t>(p)].transpose(), p);
  return fmt;
}

DenseTensor expand(const TuckerFormat& fmt) {
  DenseTensor t = fmt.core;
  for (int p = 0; p < t.order(); ++p) t = ttm(t, fmt.bases[static_cast<std::size_t>(p)], p);
  return t;
}

Eigen::MatrixXd compressed_mttkrp(const TuckerFormat& fmt, const KruskalModel& m, int mode) {
  const int n = m.order();
  if (static_cast<int>(fmt.bases.size()) != n)
    throw std::invalid_argument("compressed_mttkrp: order mismatch");
  // Project the factors into the compressed space, then contract the core
  // with their Khatri-Rao product; ordering matches the unfold convention.
  std::vector<Eigen::MatrixXd> projected;
  projected.reserve(static_cast<std::size_t>(n - 1));
  for (int l = n - 1; l >= 0; --l)
    if (l != mode)
      projected.push_back(fmt.bases[static_cast<std::size_t>(l)].transpose() * m.factor(l));
  const Eigen::MatrixXd kr = projected.empty()
                                 ? Eigen::MatrixXd::Ones(1, m.rank())
                                 : khatri_rao(projected);
  return fmt.bases[static_cast<std::size_t>(mode)] * (unfold(fmt.core, mode) * kr);
}

Eigen::MatrixXd compressed_gradient(const TuckerFormat& fmt, const KruskalModel& m, int mode,
                                    const GramCache& cache) {
  return m.factor(mode) * hadamard_of_grams(cache.grams, mode) - compressed_mttkrp(fmt, m, mode);
}

double compressed_objective(const TuckerFormat& fmt, const KruskalModel& m,
                            const GramCache& cache) {
  const int pivot = m.order() - 1;
  return cheap_objective(fmt.core.norm_sq(), m.factor(pivot),
                         hadamard_of_grams(cache.grams, pivot),
                         compressed_mttkrp(fmt, m, pivot));
}

TuckerProvider::TuckerProvider(const TuckerFormat& fmt)
    : fmt_(&fmt), norm_sq_(fmt.core.norm_sq()) {}

namespace {

constexpr char kMagic[4] = {'N', 'T', 'F', 'K'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

void TuckerFormat::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(kMagic, 4);
  const std::uint32_t version = kVersion;
  const std::uint32_t order = static_cast<std::uint32_t>(bases.size());
  out.write(reinterpret_cast<const char*>(&version), sizeof version);
  out.write(reinterpret_cast<const char*>(&order), sizeof order);
  for (const auto& b : bases) {
    const std::uint64_t d = static_cast<std::uint64_t>(b.rows());
    out.write(reinterpret_cast<const char*>(&d), sizeof d);
  }
  for (int r : core.shape()) {
    const std::uint64_t d = static_cast<std::uint64_t>(r);
    out.write(reinterpret_cast<const char*>(&d), sizeof d);
  }
  out.write(reinterpret_cast<const char*>(core.data()),
            static_cast<std::streamsize>(core.size() * static_cast<std::int64_t>(sizeof(double))));
  for (const auto& b : bases)
    for (Eigen::Index i = 0; i < b.rows(); ++i)
      for (Eigen::Index j = 0; j < b.cols(); ++j) {
        const double v = b(i, j);
        out.write(reinterpret_cast<const char*>(&v), sizeof v);
      }
  if (!out) throw std::runtime_error("write failed: " + path);
}

TuckerFormat TuckerFormat::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error(path + ": not a tucker container");
  std::uint32_t version = 0, order = 0;
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&order), sizeof order);
  if (!in || version != kVersion) throw std::runtime_error(path + ": unsupported version");
  if (order < 1 || order > 64) throw std::runtime_error(path + ": bad order");
  std::vector<int> shape(order), ranks(order);
  for (auto& d : shape) {
    std::uint64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    d = static_cast<int>(v);
  }
  for (auto& d : ranks) {
    std::uint64_t v = 0;
    in.read(reinterpret_cast<char*>(&v), sizeof v);
    d = static_cast<int>(v);
  }
  TuckerFormat fmt;
  std::vector<double> core_data(static_cast<std::size_t>(shape_product(ranks)));
  in.read(reinterpret_cast<char*>(core_data.data()),
          static_cast<std::streamsize>(core_data.size() * sizeof(double)));
  fmt.core = DenseTensor(ranks, std::move(core_data));
  for (std::uint32_t p = 0; p < order; ++p) {
    Eigen::MatrixXd b(shape[p], ranks[p]);
    for (Eigen::Index i = 0; i < b.rows(); ++i)
      for (Eigen::Index j = 0; j < b.cols(); ++j) in.read(reinterpret_cast<char*>(&b(i, j)), sizeof(double));
    fmt.bases.push_back(std::move(b));
  }
  if (!in) throw std::runtime_error(path + ": truncated payload");
  return fmt;
}

void TuckerFormat::save_text(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.precision(17);
  out << bases.size() << '\n';
  for (const auto& b : bases) out << b.rows() << ' ';
  out << '\n';
  for (int r : core.shape()) out << r << ' ';
  out << '\n';
  for (std::int64_t i = 0; i < core.size(); ++i)
    out << core[i] << ((i + 1) % 8 == 0 ? '\n' : ' ');
  out << '\n';
  for (const auto& b : bases)
    for (Eigen::Index i = 0; i < b.rows(); ++i)
      for (Eigen::Index j = 0; j < b.cols(); ++j)
        out << b(i, j) << (j + 1 == b.cols() ? '\n' : ' ');
  if (!out) throw std::runtime_error("write failed: " + path);
}

TuckerFormat TuckerFormat::load_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  int order = 0;
  in >> order;
  if (!in || order < 1) throw std::runtime_error(path + ": bad header");
  std::vector<int> shape(static_cast<std::size_t>(order)), ranks(static_cast<std::size_t>(order));
  for (auto& d : shape) in >> d;
  for (auto& d : ranks) in >> d;
  if (!in) throw std::runtime_error(path + ": bad header");
  TuckerFormat fmt;
  std::vector<double> core_data(static_cast<std::size_t>(shape_product(ranks)));
  for (auto& v : core_data) in >> v;
  fmt.core = DenseTensor(ranks, std::move(core_data));
  for (int p = 0; p < order; ++p) {
    Eigen::MatrixXd b(shape[static_cast<std::size_t>(p)], ranks[static_cast<std::size_t>(p)]);
    for (Eigen::Index i = 0; i < b.rows(); ++i)
      for (Eigen::Index j = 0; j < b.cols(); ++j) in >> b(i, j);
    fmt.bases.push_back(std::move(b));
  }
  if (!in) throw std::runtime_error(path + ": truncated payload");
  return fmt;
}

}  // namespace ntf
