#include "ntf/tensor.hpp"

#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ntf {

std::int64_t shape_product(const std::vector<int>& shape) {
  if (shape.empty()) throw std::invalid_argument("tensor shape must have order >= 1");
  std::int64_t n = 1;
  for (int d : shape) {
    if (d < 1) throw std::invalid_argument("tensor dimensions must be positive");
    n *= d;
  }
  return n;
}

std::vector<std::int64_t> row_major_strides(const std::vector<int>& shape) {
  std::vector<std::int64_t> strides(shape.size(), 1);
  for (int l = static_cast<int>(shape.size()) - 2; l >= 0; --l)
    strides[l] = strides[l + 1] * shape[l + 1];
  return strides;
}

DenseTensor::DenseTensor(std::vector<int> shape)
    : shape_(std::move(shape)), data_(static_cast<std::size_t>(shape_product(shape_)), 0.0) {}

DenseTensor::DenseTensor(std::vector<int> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (static_cast<std::int64_t>(data_.size()) != shape_product(shape_))
    throw std::invalid_argument("tensor data length does not match shape");
}

std::int64_t DenseTensor::flat_index(const std::vector<int>& index) const {
  if (index.size() != shape_.size()) throw std::invalid_argument("index order mismatch");
  std::int64_t f = 0;
  for (std::size_t l = 0; l < shape_.size(); ++l) f = f * shape_[l] + index[l];
  return f;
}

double DenseTensor::norm_sq() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return s;
}

namespace {

constexpr char kMagic[4] = {'N', 'T', 'F', 'T'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

void DenseTensor::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(kMagic, 4);
  std::uint32_t version = kVersion;
  std::uint32_t order = static_cast<std::uint32_t>(shape_.size());
  out.write(reinterpret_cast<const char*>(&version), sizeof version);
  out.write(reinterpret_cast<const char*>(&order), sizeof order);
  for (int d : shape_) {
    std::uint64_t dd = static_cast<std::uint64_t>(d);
    out.write(reinterpret_cast<const char*>(&dd), sizeof dd);
  }
  out.write(reinterpret_cast<const char*>(data_.data()),
            static_cast<std::streamsize>(data_.size() * sizeof(double)));
  if (!out) throw std::runtime_error("write failed: " + path);
}

DenseTensor DenseTensor::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error(path + ": not a tensor container");
  std::uint32_t version = 0, order = 0;
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&order), sizeof order);
  if (!in || version != kVersion) throw std::runtime_error(path + ": unsupported version");
  if (order < 1 || order > 64) throw std::runtime_error(path + ": bad order");
  std::vector<int> shape(order);
  for (std::uint32_t l = 0; l < order; ++l) {
    std::uint64_t d = 0;
    in.read(reinterpret_cast<char*>(&d), sizeof d);
    shape[l] = static_cast<int>(d);
  }
  std::vector<double> data(static_cast<std::size_t>(shape_product(shape)));
  in.read(reinterpret_cast<char*>(data.data()),
          static_cast<std::streamsize>(data.size() * sizeof(double)));
  if (!in) throw std::runtime_error(path + ": truncated payload");
  return DenseTensor(std::move(shape), std::move(data));
}

void DenseTensor::save_text(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << shape_.size();
  for (int d : shape_) out << ' ' << d;
  out << '\n';
  out.precision(17);
  for (std::size_t i = 0; i < data_.size(); ++i)
    out << data_[i] << ((i + 1) % 8 == 0 ? '\n' : ' ');
  out << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

DenseTensor DenseTensor::load_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  int order = 0;
  in >> order;
  if (!in || order < 1) throw std::runtime_error(path + ": bad header");
  std::vector<int> shape(order);
  for (int& d : shape) in >> d;
  if (!in) throw std::runtime_error(path + ": bad header");
  std::vector<double> data(static_cast<std::size_t>(shape_product(shape)));
  for (double& v : data) in >> v;
  if (!in) throw std::runtime_error(path + ": truncated values");
  return DenseTensor(std::move(shape), std::move(data));
}

}  // namespace ntf
