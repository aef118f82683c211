#pragma once

#include <vector>

namespace rgp {

using Vector = std::vector<double>;

/// Dense row-major matrix of 64-bit reals.
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), data(static_cast<size_t>(r) * c, 0.0) {}

  double& at(int r, int c) { return data[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return data[static_cast<size_t>(r) * cols + c]; }
};

// y = W x + b
Vector affine(const Matrix& w, const Vector& x, const Vector& b);

Vector relu(Vector x);

// Numerically stable two-way softmax (max-shifted exponentials).
Vector softmax2(const Vector& z);

double dot(const Vector& a, const Vector& b);

// Reverse-mode primitives. Parameter gradients accumulate into gw/gb; the
// return value is the gradient w.r.t. the input.
Vector affine_backward(const Matrix& w, const Vector& x, const Vector& gy, Matrix& gw,
                       Vector& gb);

// Gate convention: d relu / dx = 0 at x = 0, so gating on the activated
// output (y > 0) is exact.
Vector relu_backward(const Vector& activated, const Vector& gy);

// d(-log p[label]) / dz for p = softmax2(z).
Vector softmax2_ce_backward(const Vector& p, int label);

void axpy(double alpha, const Vector& x, Vector& y);  // y += alpha * x

}  // namespace rgp
