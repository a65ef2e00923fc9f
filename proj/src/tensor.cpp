// Copyright 2026 The tsvd-sim developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tsvd/tensor.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace tsvd {

Tensor3::Tensor3(int rows, int cols, int depth) : rows_(rows), cols_(cols), depth_(depth) {
  if (rows < 1 || cols < 1 || depth < 1)
    throw ShapeError("Tensor3: all dims must be >= 1, got " + std::to_string(rows) + "x" +
                     std::to_string(cols) + "x" + std::to_string(depth));
  data_.assign(size(), Cplx(0.0, 0.0));
}

long Tensor3::index(int i, int j, int k) const {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_ || k < 0 || k >= depth_)
    throw std::out_of_range("Tensor3: index (" + std::to_string(i) + "," + std::to_string(j) +
                            "," + std::to_string(k) + ") outside " + std::to_string(rows_) + "x" +
                            std::to_string(cols_) + "x" + std::to_string(depth_));
  return (static_cast<long>(i) * cols_ + j) * depth_ + k;
}

Cplx& Tensor3::at(int i, int j, int k) { return data_[index(i, j, k)]; }
const Cplx& Tensor3::at(int i, int j, int k) const { return data_[index(i, j, k)]; }

Mat Tensor3::face(int k) const {
  if (k < 0 || k >= depth_) throw std::out_of_range("Tensor3::face: k out of range");
  Mat f(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) f(i, j) = data_[(static_cast<long>(i) * cols_ + j) * depth_ + k];
  return f;
}

void Tensor3::set_face(int k, const Mat& f) {
  if (k < 0 || k >= depth_) throw std::out_of_range("Tensor3::set_face: k out of range");
  if (f.rows() != rows_ || f.cols() != cols_)
    throw ShapeError("Tensor3::set_face: face shape mismatch");
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) data_[(static_cast<long>(i) * cols_ + j) * depth_ + k] = f(i, j);
}

Vec Tensor3::tube(int i, int j) const {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
    throw std::out_of_range("Tensor3::tube: (i,j) out of range");
  Vec t(depth_);
  for (int k = 0; k < depth_; ++k) t(k) = data_[(static_cast<long>(i) * cols_ + j) * depth_ + k];
  return t;
}

void Tensor3::set_tube(int i, int j, const Vec& t) {
  if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
    throw std::out_of_range("Tensor3::set_tube: (i,j) out of range");
  if (t.size() != depth_) throw ShapeError("Tensor3::set_tube: tube length mismatch");
  for (int k = 0; k < depth_; ++k) data_[(static_cast<long>(i) * cols_ + j) * depth_ + k] = t(k);
}

double Tensor3::frob_norm_sq() const {
  double s = 0.0;
  for (const Cplx& v : data_) s += std::norm(v);
  return s;
}

double Tensor3::frob_norm() const { return std::sqrt(frob_norm_sq()); }

double Tensor3::max_abs_imag() const {
  double m = 0.0;
  for (const Cplx& v : data_) m = std::max(m, std::abs(v.imag()));
  return m;
}

Tensor3& Tensor3::operator*=(Cplx s) {
  for (Cplx& v : data_) v *= s;
  return *this;
}

Tensor3 Tensor3::operator-(const Tensor3& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_ || depth_ != o.depth_)
    throw ShapeError("Tensor3: shape mismatch in subtraction");
  Tensor3 r(rows_, cols_, depth_);
  for (long x = 0; x < size(); ++x) r.data_[x] = data_[x] - o.data_[x];
  return r;
}

Tensor3 Tensor3::operator+(const Tensor3& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_ || depth_ != o.depth_)
    throw ShapeError("Tensor3: shape mismatch in addition");
  Tensor3 r(rows_, cols_, depth_);
  for (long x = 0; x < size(); ++x) r.data_[x] = data_[x] + o.data_[x];
  return r;
}

double frob_dist(const Tensor3& a, const Tensor3& b) { return (a - b).frob_norm(); }

Tensor3 pad_pow2(const Tensor3& t) {
  int r = static_cast<int>(next_pow2(t.rows()));
  int c = static_cast<int>(next_pow2(t.cols()));
  int d = static_cast<int>(next_pow2(t.depth()));
  if (r == t.rows() && c == t.cols() && d == t.depth()) return t;
  Tensor3 p(r, c, d);
  for (int i = 0; i < t.rows(); ++i)
    for (int j = 0; j < t.cols(); ++j)
      for (int k = 0; k < t.depth(); ++k) p.at(i, j, k) = t.at(i, j, k);
  return p;
}

Tensor3 pad_pow2_square(const Tensor3& t) {
  int s = static_cast<int>(std::max(next_pow2(t.rows()), next_pow2(t.cols())));
  int d = static_cast<int>(next_pow2(t.depth()));
  if (s == t.rows() && s == t.cols() && d == t.depth()) return t;
  Tensor3 p(s, s, d);
  for (int i = 0; i < t.rows(); ++i)
    for (int j = 0; j < t.cols(); ++j)
      for (int k = 0; k < t.depth(); ++k) p.at(i, j, k) = t.at(i, j, k);
  return p;
}

namespace {

// Interleaves an (r, c) pair into the Z-order position, column bits ahead of
// row bits within each pair.
long zorder_pos(long r, long c, int nbits) {
  long pos = 0;
  for (int b = 0; b < nbits; ++b) {
    pos |= ((r >> b) & 1L) << (2 * b);
    pos |= ((c >> b) & 1L) << (2 * b + 1);
  }
  return pos;
}

}  // namespace

Vec zorder_flatten(const Mat& m) {
  if (m.rows() != m.cols() || !is_pow2(m.rows()))
    throw ShapeError("zorder_flatten: matrix must be square with power-of-two size");
  int nbits = log2_exact(m.rows());
  Vec v = Vec::Zero(m.rows() * m.cols());
  for (long r = 0; r < m.rows(); ++r)
    for (long c = 0; c < m.cols(); ++c) v(zorder_pos(r, c, nbits)) = m(r, c);
  return v;
}

Mat zorder_unflatten(const Vec& v) {
  long sz = v.size();
  if (sz < 1 || !is_pow2(sz) || (log2_exact(sz) % 2) != 0)
    throw ShapeError("zorder_unflatten: length must be 4^n");
  long side = 1L << (log2_exact(sz) / 2);
  int nbits = log2_exact(side);
  Mat m(side, side);
  for (long r = 0; r < side; ++r)
    for (long c = 0; c < side; ++c) m(r, c) = v(zorder_pos(r, c, nbits));
  return m;
}

Vec flatten_tensor(const Tensor3& t) {
  if (t.rows() != t.cols() || !is_pow2(t.rows()) || !is_pow2(t.depth()))
    throw ShapeError("flatten_tensor: need square power-of-two faces and power-of-two depth");
  double nrm = t.frob_norm();
  if (nrm == 0.0) throw DegenerateInputError("flatten_tensor: zero tensor");
  long per_face = static_cast<long>(t.rows()) * t.cols();
  Vec v(per_face * t.depth());
  for (int k = 0; k < t.depth(); ++k) v.segment(static_cast<long>(k) * per_face, per_face) = zorder_flatten(t.face(k));
  return v / nrm;
}

Tensor3 load_tensor_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ShapeError(std::string("tensor json: parse failure: ") + e.what());
  }
  if (!j.contains("dims") || !j.contains("entries"))
    throw ShapeError("tensor json: missing 'dims' or 'entries'");
  auto dims = j["dims"];
  if (!dims.is_array() || dims.size() != 3)
    throw ShapeError("tensor json: 'dims' must be [rows, cols, depth]");
  Tensor3 t(dims[0].get<int>(), dims[1].get<int>(), dims[2].get<int>());
  auto ent = j["entries"];
  if (!ent.is_array() || static_cast<long>(ent.size()) != t.size())
    throw ShapeError("tensor json: 'entries' length " + std::to_string(ent.size()) +
                     " does not match dims product " + std::to_string(t.size()));
  for (long x = 0; x < t.size(); ++x) {
    auto pair = ent[x];
    if (!pair.is_array() || pair.size() != 2)
      throw ShapeError("tensor json: entry " + std::to_string(x) + " is not an [re, im] pair");
    t.data()[x] = Cplx(pair[0].get<double>(), pair[1].get<double>());
  }
  return t;
}

Tensor3 load_tensor_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open tensor file: " + path);
  return load_tensor_json(f);
}

void save_tensor_json(const Tensor3& t, std::ostream& out) {
  nlohmann::json j;
  j["dims"] = {t.rows(), t.cols(), t.depth()};
  nlohmann::json ent = nlohmann::json::array();
  for (const Cplx& v : t.data()) ent.push_back({v.real(), v.imag()});
  j["entries"] = std::move(ent);
  out << j.dump(2) << "\n";
}

void save_tensor_json_file(const Tensor3& t, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open tensor file for writing: " + path);
  save_tensor_json(t, f);
}

}  // namespace tsvd
