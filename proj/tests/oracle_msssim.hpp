#pragma once

// Independent metric references used by unit tests and the acceptance
// suite. Deliberately naive: per-window loops, no separable filtering.

#include <algorithm>
#include <cmath>
#include <vector>

#include "rasc/types.hpp"

namespace testoracle {

using rasc::Image8;

// Direct-definition MS-SSIM: per-window loops, no separable filtering. Slow
// but independent of the production path.
double oracle_ms_ssim(const Image8& a, const Image8& b) {
  const double c1 = 6.5025, c2 = 58.5225;  // (K*255)^2
  double kernel[11][11];
  {
    double k1d[11], sum = 0;
    for (int i = 0; i < 11; ++i) {
      double d = i - 5.0;
      k1d[i] = std::exp(-d * d / 4.5);
      sum += k1d[i];
    }
    for (int i = 0; i < 11; ++i) k1d[i] /= sum;
    for (int i = 0; i < 11; ++i)
      for (int j = 0; j < 11; ++j) kernel[i][j] = k1d[i] * k1d[j];
  }
  const double weights[5] = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};

  uint32_t min_dim = std::min(a.width, a.height);
  int scales = 0;
  for (int m = 1; m <= 5; ++m)
    if (min_dim / (1u << (m - 1)) >= 11) scales = m;
  double wsum = 0;
  for (int m = 0; m < scales; ++m) wsum += weights[m];

  double total = 0;
  for (int ch = 0; ch < 3; ++ch) {
    std::vector<std::vector<double>> x(a.height, std::vector<double>(a.width));
    std::vector<std::vector<double>> y(a.height, std::vector<double>(a.width));
    for (uint32_t r = 0; r < a.height; ++r)
      for (uint32_t c = 0; c < a.width; ++c) {
        x[r][c] = a.at(c, r, ch);
        y[r][c] = b.at(c, r, ch);
      }
    double channel = 1.0;
    for (int m = 0; m < scales; ++m) {
      size_t h = x.size(), w = x[0].size();
      double l_acc = 0, cs_acc = 0;
      size_t windows = 0;
      for (size_t wy = 0; wy + 11 <= h; ++wy)
        for (size_t wx = 0; wx + 11 <= w; ++wx) {
          double mx = 0, my = 0, sxx = 0, syy = 0, sxy = 0;
          for (int i = 0; i < 11; ++i)
            for (int j = 0; j < 11; ++j) {
              mx += kernel[i][j] * x[wy + i][wx + j];
              my += kernel[i][j] * y[wy + i][wx + j];
              sxx += kernel[i][j] * x[wy + i][wx + j] * x[wy + i][wx + j];
              syy += kernel[i][j] * y[wy + i][wx + j] * y[wy + i][wx + j];
              sxy += kernel[i][j] * x[wy + i][wx + j] * y[wy + i][wx + j];
            }
          double vx = sxx - mx * mx, vy = syy - my * my, cov = sxy - mx * my;
          l_acc += (2 * mx * my + c1) / (mx * mx + my * my + c1);
          cs_acc += (2 * cov + c2) / (vx + vy + c2);
          ++windows;
        }
      double wgt = weights[m] / wsum;
      channel *= std::pow(std::max(cs_acc / windows, 0.0), wgt);
      if (m == scales - 1) channel *= std::pow(std::max(l_acc / windows, 0.0), wgt);
      if (m + 1 < scales) {
        size_t nh = h / 2, nw = w / 2;
        std::vector<std::vector<double>> dx(nh, std::vector<double>(nw));
        std::vector<std::vector<double>> dy(nh, std::vector<double>(nw));
        for (size_t r = 0; r < nh; ++r)
          for (size_t c = 0; c < nw; ++c) {
            dx[r][c] = 0.25 * (x[2 * r][2 * c] + x[2 * r][2 * c + 1] + x[2 * r + 1][2 * c] +
                               x[2 * r + 1][2 * c + 1]);
            dy[r][c] = 0.25 * (y[2 * r][2 * c] + y[2 * r][2 * c + 1] + y[2 * r + 1][2 * c] +
                               y[2 * r + 1][2 * c + 1]);
          }
        x = std::move(dx);
        y = std::move(dy);
      }
    }
    total += channel;
  }
  return total / 3.0;
}


}  // namespace testoracle
