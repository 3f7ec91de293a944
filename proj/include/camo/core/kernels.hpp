#pragma once

#include <omp.h>

#include <algorithm>
#include <cassert>
#include <cstring>
#include <vector>

// Conv2D / dense kernels used by the predator nets. Each kernel exists in
// two forms: the serial reference under kernels::ref, and the OpenMP form
// under kernels:: proper. The parallel form distributes whole examples (or
// rows of the parameter gradient) across threads, so every array element
// is accumulated by exactly one thread in the same order as the reference
// — results are bit-identical for any thread count. Tests assert that
// equality; the benchmark tool compares their throughput.
//
// Convolutions lower each example to column form (im2col) and run small
// streamed matrix products over it; the inner loops walk contiguous rows,
// which is what makes the strided stages vectorize.
//
// Layouts: activations are [n][c][h][w]; conv weights are [oc][ic][kh][kw];
// dense weights are [out][in]. Padding is "same": out = ceil(in / stride),
// with the extra pad pixel at the bottom/right when the total is odd.

namespace camo::kernels {

struct ConvDims {
  int in_c, in_h, in_w;
  int out_c, kernel, stride;
  int out_h, out_w;
  int pad_top, pad_left;

  int patch() const { return in_c * kernel * kernel; }      // K
  int columns() const { return out_h * out_w; }             // N
  size_t in_size() const { return static_cast<size_t>(in_c) * in_h * in_w; }
  size_t out_size() const { return static_cast<size_t>(out_c) * out_h * out_w; }
};

inline ConvDims make_conv_dims(int in_c, int in_h, int in_w, int out_c,
                               int kernel, int stride) {
  ConvDims d{};
  d.in_c = in_c;
  d.in_h = in_h;
  d.in_w = in_w;
  d.out_c = out_c;
  d.kernel = kernel;
  d.stride = stride;
  d.out_h = (in_h + stride - 1) / stride;
  d.out_w = (in_w + stride - 1) / stride;
  const int pad_h = std::max((d.out_h - 1) * stride + kernel - in_h, 0);
  const int pad_w = std::max((d.out_w - 1) * stride + kernel - in_w, 0);
  d.pad_top = pad_h / 2;
  d.pad_left = pad_w / 2;
  return d;
}

namespace detail {

// floor/ceil division for possibly negative numerators, positive divisor
inline int ceil_div(int a, int b) { return a >= 0 ? (a + b - 1) / b : a / b; }
inline int floor_div(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

// range of output columns whose input column ow*stride + kw - pad_left is
// inside [0, in_w)
inline void ow_range(const ConvDims& d, int kw, int& lo, int& hi) {
  lo = std::max(0, ceil_div(d.pad_left - kw, d.stride));
  hi = std::min(d.out_w - 1, floor_div(d.in_w - 1 + d.pad_left - kw, d.stride));
}

// cols[k][col] with k = (ic*kernel + kh)*kernel + kw and col = oh*out_w + ow
template <class T>
void im2col(const T* x, T* cols, const ConvDims& d) {
  const int k = d.kernel;
  const int n_cols = d.columns();
  std::memset(cols, 0, sizeof(T) * static_cast<size_t>(d.patch()) * n_cols);
  for (int ic = 0; ic < d.in_c; ++ic) {
    const T* xmap = x + static_cast<size_t>(ic) * d.in_h * d.in_w;
    for (int kh = 0; kh < k; ++kh)
      for (int kw = 0; kw < k; ++kw) {
        T* crow = cols + (static_cast<size_t>((ic * k + kh)) * k + kw) * n_cols;
        int lo, hi;
        ow_range(d, kw, lo, hi);
        for (int oh = 0; oh < d.out_h; ++oh) {
          const int ih = oh * d.stride + kh - d.pad_top;
          if (ih < 0 || ih >= d.in_h) continue;
          const T* xrow = xmap + static_cast<size_t>(ih) * d.in_w + (kw - d.pad_left);
          T* out = crow + static_cast<size_t>(oh) * d.out_w;
          if (d.stride == 1)
            std::memcpy(out + lo, xrow + lo, sizeof(T) * (hi - lo + 1));
          else
            for (int ow = lo; ow <= hi; ++ow) out[ow] = xrow[ow * d.stride];
        }
      }
  }
}

// scatter-add of column-space gradients back onto the input image
template <class T>
void col2im_add(const T* cols, T* dx, const ConvDims& d) {
  const int k = d.kernel;
  const int n_cols = d.columns();
  std::memset(dx, 0, sizeof(T) * d.in_size());
  for (int ic = 0; ic < d.in_c; ++ic) {
    T* xmap = dx + static_cast<size_t>(ic) * d.in_h * d.in_w;
    for (int kh = 0; kh < k; ++kh)
      for (int kw = 0; kw < k; ++kw) {
        const T* crow = cols + (static_cast<size_t>((ic * k + kh)) * k + kw) * n_cols;
        int lo, hi;
        ow_range(d, kw, lo, hi);
        for (int oh = 0; oh < d.out_h; ++oh) {
          const int ih = oh * d.stride + kh - d.pad_top;
          if (ih < 0 || ih >= d.in_h) continue;
          T* xrow = xmap + static_cast<size_t>(ih) * d.in_w + (kw - d.pad_left);
          const T* in = crow + static_cast<size_t>(oh) * d.out_w;
          for (int ow = lo; ow <= hi; ++ow) xrow[ow * d.stride] += in[ow];
        }
      }
  }
}

// y[oc][col] = bias[oc] + sum_k w[oc][k] * cols[k][col]
template <class T>
void forward_gemm(const T* w, const T* cols, const T* bias, T* y, int out_c,
                  int K, int N) {
  for (int oc = 0; oc < out_c; ++oc) {
    T* yrow = y + static_cast<size_t>(oc) * N;
    std::fill_n(yrow, N, bias[oc]);
    const T* wrow = w + static_cast<size_t>(oc) * K;
    for (int k = 0; k < K; ++k) {
      const T wv = wrow[k];
      const T* crow = cols + static_cast<size_t>(k) * N;
      for (int col = 0; col < N; ++col) yrow[col] += wv * crow[col];
    }
  }
}

// dcols[k][col] += sum_oc w[oc][k] * dy[oc][col]
template <class T>
void backward_cols_gemm(const T* w, const T* dy, T* dcols, int out_c, int K,
                        int N) {
  std::memset(dcols, 0, sizeof(T) * static_cast<size_t>(K) * N);
  for (int oc = 0; oc < out_c; ++oc) {
    const T* wrow = w + static_cast<size_t>(oc) * K;
    const T* dyrow = dy + static_cast<size_t>(oc) * N;
    for (int k = 0; k < K; ++k) {
      const T wv = wrow[k];
      T* crow = dcols + static_cast<size_t>(k) * N;
      for (int col = 0; col < N; ++col) crow[col] += wv * dyrow[col];
    }
  }
}

// cache-blocked transpose: cols[K][N] -> colsT[N][K]
template <class T>
void transpose(const T* cols, T* colsT, int K, int N) {
  constexpr int B = 32;
  for (int k0 = 0; k0 < K; k0 += B)
    for (int n0 = 0; n0 < N; n0 += B) {
      const int k1 = std::min(k0 + B, K);
      const int n1 = std::min(n0 + B, N);
      for (int k = k0; k < k1; ++k)
        for (int n = n0; n < n1; ++n)
          colsT[static_cast<size_t>(n) * K + k] =
              cols[static_cast<size_t>(k) * N + n];
    }
}

// dw[oc][k] += sum_col dy[oc][col] * colsT[col][k]; example-local update,
// accumulated across the batch by the caller in fixed order
template <class T>
void weight_grad_gemm(const T* dy, const T* colsT, T* dw, int out_c, int K,
                      int N) {
  for (int oc = 0; oc < out_c; ++oc) {
    T* dwrow = dw + static_cast<size_t>(oc) * K;
    const T* dyrow = dy + static_cast<size_t>(oc) * N;
    for (int col = 0; col < N; ++col) {
      const T dyv = dyrow[col];
      const T* crow = colsT + static_cast<size_t>(col) * K;
      for (int k = 0; k < K; ++k) dwrow[k] += dyv * crow[k];
    }
  }
}

template <class T>
struct ConvScratch {
  std::vector<T> cols, colsT;
  void reserve(const ConvDims& d, bool with_transpose) {
    cols.resize(static_cast<size_t>(d.patch()) * d.columns());
    if (with_transpose) colsT.resize(cols.size());
  }
};

template <class T>
void conv2d_forward_one(const T* x, const T* w, const T* bias, T* y,
                        const ConvDims& d, ConvScratch<T>& scratch) {
  im2col(x, scratch.cols.data(), d);
  forward_gemm(w, scratch.cols.data(), bias, y, d.out_c, d.patch(), d.columns());
}

template <class T>
void conv2d_backward_input_one(const T* dy, const T* w, T* dx,
                               const ConvDims& d, ConvScratch<T>& scratch) {
  backward_cols_gemm(w, dy, scratch.cols.data(), d.out_c, d.patch(), d.columns());
  col2im_add(scratch.cols.data(), dx, d);
}

// per-example weight-gradient contribution into dw (no zeroing here)
template <class T>
void conv2d_backward_params_one(const T* x, const T* dy, T* dw,
                                const ConvDims& d, ConvScratch<T>& scratch) {
  im2col(x, scratch.cols.data(), d);
  transpose(scratch.cols.data(), scratch.colsT.data(), d.patch(), d.columns());
  weight_grad_gemm(dy, scratch.colsT.data(), dw, d.out_c, d.patch(), d.columns());
}

template <class T>
T bias_grad_one_channel(const T* dy, int n, int oc, const ConvDims& d) {
  T acc = 0;
  for (int n_i = 0; n_i < n; ++n_i) {
    const T* dymap = dy + static_cast<size_t>(n_i) * d.out_size() +
                     static_cast<size_t>(oc) * d.columns();
    for (int i = 0; i < d.columns(); ++i) acc += dymap[i];
  }
  return acc;
}

}  // namespace detail

namespace ref {

template <class T>
void conv2d_forward(const T* x, const T* w, const T* bias, T* y, int n,
                    const ConvDims& d) {
  detail::ConvScratch<T> scratch;
  scratch.reserve(d, false);
  for (int n_i = 0; n_i < n; ++n_i)
    detail::conv2d_forward_one(x + n_i * d.in_size(), w, bias,
                               y + n_i * d.out_size(), d, scratch);
}

template <class T>
void conv2d_backward_input(const T* dy, const T* w, T* dx, int n,
                           const ConvDims& d) {
  detail::ConvScratch<T> scratch;
  scratch.reserve(d, false);
  for (int n_i = 0; n_i < n; ++n_i)
    detail::conv2d_backward_input_one(dy + n_i * d.out_size(), w,
                                      dx + n_i * d.in_size(), d, scratch);
}

template <class T>
void conv2d_backward_params(const T* x, const T* dy, T* dw, T* db, int n,
                            const ConvDims& d) {
  std::memset(dw, 0, sizeof(T) * static_cast<size_t>(d.out_c) * d.patch());
  detail::ConvScratch<T> scratch;
  scratch.reserve(d, true);
  for (int n_i = 0; n_i < n; ++n_i)
    detail::conv2d_backward_params_one(x + n_i * d.in_size(),
                                       dy + n_i * d.out_size(), dw, d, scratch);
  for (int oc = 0; oc < d.out_c; ++oc)
    db[oc] = detail::bias_grad_one_channel(dy, n, oc, d);
}

template <class T>
void dense_forward(const T* x, const T* w, const T* bias, T* y, int n,
                   int in_dim, int out_dim) {
  for (int n_i = 0; n_i < n; ++n_i)
    for (int o = 0; o < out_dim; ++o) {
      const T* xrow = x + static_cast<size_t>(n_i) * in_dim;
      const T* wrow = w + static_cast<size_t>(o) * in_dim;
      T acc = bias[o];
      for (int i = 0; i < in_dim; ++i) acc += wrow[i] * xrow[i];
      y[static_cast<size_t>(n_i) * out_dim + o] = acc;
    }
}

template <class T>
void dense_backward_input(const T* dy, const T* w, T* dx, int n, int in_dim,
                          int out_dim) {
  for (int n_i = 0; n_i < n; ++n_i) {
    T* dxrow = dx + static_cast<size_t>(n_i) * in_dim;
    std::memset(dxrow, 0, sizeof(T) * in_dim);
    for (int o = 0; o < out_dim; ++o) {
      const T dyv = dy[static_cast<size_t>(n_i) * out_dim + o];
      const T* wrow = w + static_cast<size_t>(o) * in_dim;
      for (int i = 0; i < in_dim; ++i) dxrow[i] += dyv * wrow[i];
    }
  }
}

template <class T>
void dense_backward_params(const T* x, const T* dy, T* dw, T* db, int n,
                           int in_dim, int out_dim) {
  for (int o = 0; o < out_dim; ++o) {
    T* dwrow = dw + static_cast<size_t>(o) * in_dim;
    std::memset(dwrow, 0, sizeof(T) * in_dim);
    T dbacc = 0;
    for (int n_i = 0; n_i < n; ++n_i) {
      const T dyv = dy[static_cast<size_t>(n_i) * out_dim + o];
      const T* xrow = x + static_cast<size_t>(n_i) * in_dim;
      for (int i = 0; i < in_dim; ++i) dwrow[i] += dyv * xrow[i];
      dbacc += dyv;
    }
    db[o] = dbacc;
  }
}

}  // namespace ref

template <class T>
void conv2d_forward(const T* x, const T* w, const T* bias, T* y, int n,
                    const ConvDims& d) {
#pragma omp parallel
  {
    detail::ConvScratch<T> scratch;
    scratch.reserve(d, false);
#pragma omp for schedule(static)
    for (int n_i = 0; n_i < n; ++n_i)
      detail::conv2d_forward_one(x + n_i * d.in_size(), w, bias,
                                 y + n_i * d.out_size(), d, scratch);
  }
}

template <class T>
void conv2d_backward_input(const T* dy, const T* w, T* dx, int n,
                           const ConvDims& d) {
#pragma omp parallel
  {
    detail::ConvScratch<T> scratch;
    scratch.reserve(d, false);
#pragma omp for schedule(static)
    for (int n_i = 0; n_i < n; ++n_i)
      detail::conv2d_backward_input_one(dy + n_i * d.out_size(), w,
                                        dx + n_i * d.in_size(), d, scratch);
  }
}

// Weight gradients sum over the batch, so whole-example threading would
// race. Each thread instead owns a block of output channels and walks the
// batch in order; the per-element accumulation sequence (example, then
// column) is the same as the reference for any block count.
template <class T>
void conv2d_backward_params(const T* x, const T* dy, T* dw, T* db, int n,
                            const ConvDims& d) {
  std::memset(dw, 0, sizeof(T) * static_cast<size_t>(d.out_c) * d.patch());
  const int blocks = std::min(d.out_c, omp_get_max_threads());
#pragma omp parallel
  {
    detail::ConvScratch<T> scratch;
    scratch.reserve(d, true);
#pragma omp for schedule(static)
    for (int oc_block = 0; oc_block < blocks; ++oc_block) {
      const int oc_lo = oc_block * d.out_c / blocks;
      const int oc_hi = (oc_block + 1) * d.out_c / blocks;
      const int K = d.patch();
      const int N = d.columns();
      for (int n_i = 0; n_i < n; ++n_i) {
        detail::im2col(x + n_i * d.in_size(), scratch.cols.data(), d);
        detail::transpose(scratch.cols.data(), scratch.colsT.data(), K, N);
        detail::weight_grad_gemm(
            dy + n_i * d.out_size() + static_cast<size_t>(oc_lo) * N,
            scratch.colsT.data(), dw + static_cast<size_t>(oc_lo) * K,
            oc_hi - oc_lo, K, N);
      }
    }
  }
#pragma omp parallel for schedule(static)
  for (int oc = 0; oc < d.out_c; ++oc)
    db[oc] = detail::bias_grad_one_channel(dy, n, oc, d);
}

template <class T>
void dense_forward(const T* x, const T* w, const T* bias, T* y, int n,
                   int in_dim, int out_dim) {
#pragma omp parallel for collapse(2) schedule(static)
  for (int n_i = 0; n_i < n; ++n_i)
    for (int o = 0; o < out_dim; ++o) {
      const T* xrow = x + static_cast<size_t>(n_i) * in_dim;
      const T* wrow = w + static_cast<size_t>(o) * in_dim;
      T acc = bias[o];
      for (int i = 0; i < in_dim; ++i) acc += wrow[i] * xrow[i];
      y[static_cast<size_t>(n_i) * out_dim + o] = acc;
    }
}

template <class T>
void dense_backward_input(const T* dy, const T* w, T* dx, int n, int in_dim,
                          int out_dim) {
#pragma omp parallel for schedule(static)
  for (int n_i = 0; n_i < n; ++n_i) {
    T* dxrow = dx + static_cast<size_t>(n_i) * in_dim;
    std::memset(dxrow, 0, sizeof(T) * in_dim);
    for (int o = 0; o < out_dim; ++o) {
      const T dyv = dy[static_cast<size_t>(n_i) * out_dim + o];
      const T* wrow = w + static_cast<size_t>(o) * in_dim;
      for (int i = 0; i < in_dim; ++i) dxrow[i] += dyv * wrow[i];
    }
  }
}

template <class T>
void dense_backward_params(const T* x, const T* dy, T* dw, T* db, int n,
                           int in_dim, int out_dim) {
#pragma omp parallel for schedule(static)
  for (int o = 0; o < out_dim; ++o) {
    T* dwrow = dw + static_cast<size_t>(o) * in_dim;
    std::memset(dwrow, 0, sizeof(T) * in_dim);
    T dbacc = 0;
    for (int n_i = 0; n_i < n; ++n_i) {
      const T dyv = dy[static_cast<size_t>(n_i) * out_dim + o];
      const T* xrow = x + static_cast<size_t>(n_i) * in_dim;
      for (int i = 0; i < in_dim; ++i) dwrow[i] += dyv * xrow[i];
      dbacc += dyv;
    }
    db[o] = dbacc;
  }
}

}  // namespace camo::kernels
