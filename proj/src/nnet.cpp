#include "rgp/nnet.hpp"

#include <algorithm>
#include <cmath>

#include "rgp/errors.hpp"

namespace rgp {

Vector affine(const Matrix& w, const Vector& x, const Vector& b) {
  require(w.cols == static_cast<int>(x.size()) && w.rows == static_cast<int>(b.size()),
          "affine: shape mismatch");
  Vector y(b);
  for (int r = 0; r < w.rows; ++r) {
    const double* row = &w.data[static_cast<size_t>(r) * w.cols];
    double acc = 0.0;
    for (int c = 0; c < w.cols; ++c) acc += row[c] * x[c];
    y[r] += acc;
  }
  return y;
}

Vector relu(Vector x) {
  for (double& v : x) v = std::max(0.0, v);
  return x;
}

Vector softmax2(const Vector& z) {
  require(z.size() == 2, "softmax2: expects length 2");
  const double m = std::max(z[0], z[1]);
  const double e0 = std::exp(z[0] - m);
  const double e1 = std::exp(z[1] - m);
  const double sum = e0 + e1;
  return {e0 / sum, e1 / sum};
}

double dot(const Vector& a, const Vector& b) {
  require(a.size() == b.size(), "dot: shape mismatch");
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

Vector affine_backward(const Matrix& w, const Vector& x, const Vector& gy, Matrix& gw,
                       Vector& gb) {
  require(w.cols == static_cast<int>(x.size()) && w.rows == static_cast<int>(gy.size()),
          "affine_backward: shape mismatch");
  require(gw.rows == w.rows && gw.cols == w.cols && gb.size() == gy.size(),
          "affine_backward: gradient shape mismatch");
  Vector gx(x.size(), 0.0);
  for (int r = 0; r < w.rows; ++r) {
    const double g = gy[r];
    gb[r] += g;
    const double* row = &w.data[static_cast<size_t>(r) * w.cols];
    double* grow = &gw.data[static_cast<size_t>(r) * w.cols];
    for (int c = 0; c < w.cols; ++c) {
      grow[c] += g * x[c];
      gx[c] += g * row[c];
    }
  }
  return gx;
}

Vector relu_backward(const Vector& activated, const Vector& gy) {
  require(activated.size() == gy.size(), "relu_backward: shape mismatch");
  Vector gx(gy.size());
  for (size_t i = 0; i < gy.size(); ++i) gx[i] = activated[i] > 0.0 ? gy[i] : 0.0;
  return gx;
}

Vector softmax2_ce_backward(const Vector& p, int label) {
  require(p.size() == 2 && (label == 0 || label == 1), "softmax2_ce_backward: bad input");
  Vector gz(p);
  gz[label] -= 1.0;
  return gz;
}

void axpy(double alpha, const Vector& x, Vector& y) {
  require(x.size() == y.size(), "axpy: shape mismatch");
  for (size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace rgp
