#include "rasc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "rasc/io.hpp"

namespace rasc {

double mse(const Image8& a, const Image8& b) {
  require(a.width == b.width && a.height == b.height, Status::mismatch, "image dims differ");
  double sum = 0;
  for (size_t i = 0; i < a.data.size(); ++i) {
    double d = double(a.data[i]) - double(b.data[i]);
    sum += d * d;
  }
  return sum / double(a.data.size());
}

double psnr_from_mse(double mse_value, double peak) {
  require(mse_value >= 0 && peak > 0, Status::invalid_argument, "bad psnr inputs");
  if (mse_value == 0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / mse_value);
}

double psnr(const Image8& a, const Image8& b) { return psnr_from_mse(mse(a, b), 255.0); }

namespace {

struct Plane {
  uint32_t w = 0, h = 0;
  std::vector<double> v;

  double at(uint32_t x, uint32_t y) const { return v[size_t(y) * w + x]; }
};

std::vector<Plane> to_planes(const Image8& img) {
  std::vector<Plane> planes(3);
  for (int c = 0; c < 3; ++c) {
    planes[c].w = img.width;
    planes[c].h = img.height;
    planes[c].v.resize(img.pixels());
  }
  for (size_t p = 0; p < img.pixels(); ++p)
    for (int c = 0; c < 3; ++c) planes[c].v[p] = double(img.data[p * 3 + c]);
  return planes;
}

std::vector<double> gaussian_kernel_11() {
  std::vector<double> k(11);
  double sum = 0;
  for (int i = 0; i < 11; ++i) {
    double d = i - 5.0;
    k[i] = std::exp(-d * d / (2.0 * 1.5 * 1.5));
    sum += k[i];
  }
  for (double& v : k) v /= sum;
  return k;
}

// Valid-region separable Gaussian filter.
Plane gauss_valid(const Plane& p, const std::vector<double>& k) {
  uint32_t kw = uint32_t(k.size());
  Plane tmp;  // horizontal pass
  tmp.w = p.w - kw + 1;
  tmp.h = p.h;
  tmp.v.resize(size_t(tmp.w) * tmp.h);
  for (uint32_t y = 0; y < p.h; ++y)
    for (uint32_t x = 0; x < tmp.w; ++x) {
      double s = 0;
      for (uint32_t i = 0; i < kw; ++i) s += k[i] * p.at(x + i, y);
      tmp.v[size_t(y) * tmp.w + x] = s;
    }
  Plane out;
  out.w = tmp.w;
  out.h = p.h - kw + 1;
  out.v.resize(size_t(out.w) * out.h);
  for (uint32_t y = 0; y < out.h; ++y)
    for (uint32_t x = 0; x < out.w; ++x) {
      double s = 0;
      for (uint32_t i = 0; i < kw; ++i) s += k[i] * tmp.at(x, y + i);
      out.v[size_t(y) * out.w + x] = s;
    }
  return out;
}

Plane downsample2(const Plane& p) {
  Plane out;
  out.w = p.w / 2;
  out.h = p.h / 2;
  out.v.resize(size_t(out.w) * out.h);
  for (uint32_t y = 0; y < out.h; ++y)
    for (uint32_t x = 0; x < out.w; ++x)
      out.v[size_t(y) * out.w + x] =
          0.25 * (p.at(2 * x, 2 * y) + p.at(2 * x + 1, 2 * y) + p.at(2 * x, 2 * y + 1) +
                  p.at(2 * x + 1, 2 * y + 1));
  return out;
}

struct ScaleStats {
  double luminance = 0;
  double contrast_structure = 0;
};

ScaleStats ssim_scale(const Plane& a, const Plane& b, const std::vector<double>& k) {
  constexpr double kC1 = (0.01 * 255) * (0.01 * 255);
  constexpr double kC2 = (0.03 * 255) * (0.03 * 255);
  Plane mu_a = gauss_valid(a, k);
  Plane mu_b = gauss_valid(b, k);
  Plane aa = a, bb = b, ab = a;
  for (size_t i = 0; i < a.v.size(); ++i) {
    aa.v[i] = a.v[i] * a.v[i];
    bb.v[i] = b.v[i] * b.v[i];
    ab.v[i] = a.v[i] * b.v[i];
  }
  Plane s_aa = gauss_valid(aa, k);
  Plane s_bb = gauss_valid(bb, k);
  Plane s_ab = gauss_valid(ab, k);
  double l_sum = 0, cs_sum = 0;
  for (size_t i = 0; i < mu_a.v.size(); ++i) {
    double ma = mu_a.v[i], mb = mu_b.v[i];
    double va = s_aa.v[i] - ma * ma;
    double vb = s_bb.v[i] - mb * mb;
    double cov = s_ab.v[i] - ma * mb;
    l_sum += (2 * ma * mb + kC1) / (ma * ma + mb * mb + kC1);
    cs_sum += (2 * cov + kC2) / (va + vb + kC2);
  }
  double n = double(mu_a.v.size());
  return {l_sum / n, cs_sum / n};
}

constexpr double kScaleWeights[5] = {0.0448, 0.2856, 0.3001, 0.2363, 0.1333};

}  // namespace

MsSsimResult ms_ssim_full(const Image8& a, const Image8& b) {
  require(a.width == b.width && a.height == b.height, Status::mismatch, "image dims differ");
  uint32_t min_dim = std::min(a.width, a.height);
  int scales = 0;
  for (int m = 1; m <= 5; ++m) {
    if (min_dim / (1u << (m - 1)) >= 11) scales = m;
  }
  require(scales >= 1, Status::invalid_argument, "image too small for an 11x11 window");

  double weight_sum = 0;
  for (int m = 0; m < scales; ++m) weight_sum += kScaleWeights[m];

  auto kernel = gaussian_kernel_11();
  auto pa = to_planes(a);
  auto pb = to_planes(b);
  double value = 0;
  for (int c = 0; c < 3; ++c) {
    Plane x = std::move(pa[c]);
    Plane y = std::move(pb[c]);
    double channel = 1.0;
    for (int m = 0; m < scales; ++m) {
      ScaleStats st = ssim_scale(x, y, kernel);
      double w = kScaleWeights[m] / weight_sum;
      double cs = std::max(st.contrast_structure, 0.0);
      channel *= std::pow(cs, w);
      if (m == scales - 1) channel *= std::pow(std::max(st.luminance, 0.0), w);
      if (m + 1 < scales) {
        x = downsample2(x);
        y = downsample2(y);
      }
    }
    value += channel;
  }
  return {value / 3.0, scales};
}

double ms_ssim(const Image8& a, const Image8& b) { return ms_ssim_full(a, b).value; }

double bits_per_pixel(uint64_t payload_bytes, uint32_t width, uint32_t height) {
  require(uint64_t(width) * height > 0, Status::invalid_argument, "zero pixel area");
  return 8.0 * double(payload_bytes) / (double(width) * double(height));
}

double relative_detection_error(const DetectionCountRecord& rec) {
  require(rec.n_orig > 0, Status::invalid_argument,
          "relative error undefined for n_orig = 0 (record excluded)");
  return (double(rec.n_recon) - double(rec.n_orig)) / double(rec.n_orig) * 100.0;
}

double kde_scott_bandwidth(std::span<const double> samples, double scale) {
  size_t n = samples.size();
  require(n >= 2, Status::invalid_argument, "KDE needs at least 2 samples");
  double mean = 0;
  for (double s : samples) mean += s;
  mean /= double(n);
  double var = 0;
  for (double s : samples) var += (s - mean) * (s - mean);
  var /= double(n - 1);
  require(var > 0, Status::invalid_argument, "KDE bandwidth undefined for zero spread");
  return scale * std::sqrt(var) * std::pow(double(n), -0.2);
}

std::vector<double> kde_scott(std::span<const double> samples, double scale,
                              std::span<const double> eval_points) {
  double h = kde_scott_bandwidth(samples, scale);
  double norm = 1.0 / (double(samples.size()) * h * std::sqrt(2.0 * 3.14159265358979323846));
  std::vector<double> density(eval_points.size(), 0.0);
  for (size_t i = 0; i < eval_points.size(); ++i) {
    double acc = 0;
    for (double s : samples) {
      double u = (eval_points[i] - s) / h;
      acc += std::exp(-0.5 * u * u);
    }
    density[i] = acc * norm;
  }
  return density;
}

namespace {

struct ReportLine {
  std::string image_id;
  bool is_orig = false;
  double bpp = 0;
  uint32_t count = 0;
};

ReportLine parse_report_line(const std::string& line, size_t line_no, double min_score) {
  std::istringstream in(line);
  ReportLine out;
  std::string role, kind;
  auto bad = [&](const std::string& why) {
    fail(Status::bad_format, "detection report line " + std::to_string(line_no) + ": " + why);
  };
  if (!(in >> out.image_id >> role >> out.bpp >> kind)) bad("expected <id> <role> <bpp> <kind>");
  if (role == "orig")
    out.is_orig = true;
  else if (role == "recon")
    out.is_orig = false;
  else
    bad("role must be orig or recon");
  if (out.bpp < 0) bad("negative bpp");
  if (kind == "count") {
    long long n = -1;
    if (!(in >> n) || n < 0) bad("bad count");
    out.count = uint32_t(n);
  } else if (kind == "boxes") {
    std::string box;
    while (in >> box) {
      auto colon = box.rfind(':');
      if (colon == std::string::npos || colon + 1 >= box.size()) bad("box must be class:score");
      double score = 0;
      try {
        score = std::stod(box.substr(colon + 1));
      } catch (const std::exception&) {
        bad("unparsable box score");
      }
      if (score < 0 || score > 1) bad("box score out of [0,1]");
      if (score >= min_score) out.count += 1;
    }
  } else {
    bad("kind must be count or boxes");
  }
  return out;
}

}  // namespace

std::vector<DetectionCountRecord> ingest_detection_report(const std::string& path,
                                                          double min_score) {
  std::ifstream in(path);
  require(bool(in), Status::io_error, "cannot open " + path);
  std::vector<std::string> order;
  struct Pair {
    std::optional<uint32_t> n_orig, n_recon;
    double bpp = 0;
  };
  std::map<std::string, Pair> by_id;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    ReportLine rec = parse_report_line(line, line_no, min_score);
    auto [it, inserted] = by_id.try_emplace(rec.image_id);
    if (inserted) order.push_back(rec.image_id);
    if (rec.is_orig) {
      require(!it->second.n_orig, Status::bad_format, "duplicate orig record for " + rec.image_id);
      it->second.n_orig = rec.count;
    } else {
      require(!it->second.n_recon, Status::bad_format,
              "duplicate recon record for " + rec.image_id);
      it->second.n_recon = rec.count;
      it->second.bpp = rec.bpp;
    }
  }
  std::vector<DetectionCountRecord> records;
  records.reserve(order.size());
  for (const std::string& id : order) {
    const Pair& p = by_id[id];
    require(p.n_orig.has_value(), Status::bad_format, "missing orig record for " + id);
    require(p.n_recon.has_value(), Status::bad_format, "missing recon record for " + id);
    DetectionCountRecord rec;
    rec.image_id = id;
    rec.n_orig = *p.n_orig;
    rec.n_recon = *p.n_recon;
    rec.bpp = p.bpp;
    rec.excluded = rec.n_orig == 0;
    records.push_back(rec);
  }
  return records;
}

}  // namespace rasc
