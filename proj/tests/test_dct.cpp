#include <doctest.h>

#include "rasc/dct_codec.hpp"
#include "rasc/metrics.hpp"
#include "rasc/synthetic.hpp"
#include "test_util.hpp"

using namespace rasc;

TEST_CASE("payload: header round trip and validation") {
  EncodedPayload p;
  p.codec = CodecId::block_dct;
  p.quality_tag = 70;
  p.width = 640;
  p.height = 480;
  p.flags = kPayloadFlagPadWidth;
  p.body = {1, 2, 3};
  auto bytes = p.serialize();
  CHECK(bytes.size() == p.byte_length());
  EncodedPayload q = EncodedPayload::parse(bytes);
  CHECK(q.codec == p.codec);
  CHECK(q.quality_tag == 70);
  CHECK(q.width == 640);
  CHECK(q.height == 480);
  CHECK(q.body == p.body);
  CHECK(q.bpp() == doctest::Approx(8.0 * 11 / (640.0 * 480.0)));

  bytes[0] = 99;  // unknown codec id
  CHECK_THROWS_AS(EncodedPayload::parse(bytes), Error);
  std::vector<uint8_t> tiny = {1, 2};
  CHECK_THROWS_AS(EncodedPayload::parse(tiny), Error);
}

TEST_CASE("quantize: tie rule and bound") {
  CHECK(quantize_value(0.49, 1.0) == 0);
  CHECK(quantize_value(0.5, 1.0) == 1);
  CHECK(quantize_value(-0.5, 1.0) == -1);
  CHECK(quantize_value(-0.49, 1.0) == 0);
  CHECK_THROWS_AS(quantize_value(1.0, 0.0), Error);

  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    double v = rng.uniform(-50, 50);
    double q = rng.uniform(0.01, 5.0);
    double back = dequantize_value(quantize_value(v, q), q);
    CHECK(std::abs(back - v) <= q / 2 + 1e-12);
  }
}

TEST_CASE("rd losses: closed forms") {
  CHECK(rd_loss_vae(0.01, 0.5, 0.01) == doctest::Approx(0.015));
  CHECK(rd_loss_vae(0.25, 3.0, 0.0) == doctest::Approx(0.25));
  CHECK(rd_loss_vae(0.25, 0.0, 0.7) == doctest::Approx(0.25));
  CHECK_THROWS_AS(rd_loss_vae(-1, 0, 0), Error);

  RdLossConfig cfg;
  cfg.lambda = 0.01;
  CHECK(cfg.k_m == doctest::Approx(0.00234375));
  CHECK(rd_loss_gan(1.0, 0.2, 0.4, cfg) == doctest::Approx(0.20634375));
  CHECK(rd_loss_gan(0, 0, 0, cfg) == 0.0);
}

TEST_CASE("dct: constant image compresses to almost nothing") {
  Image8 img(256, 256);
  std::fill(img.data.begin(), img.data.end(), 181);
  EncodedPayload p = dct_encode_image(img, 50);
  CHECK(p.byte_length() < 600);
  Image8 back = dct_decode_image(p);
  REQUIRE(back.width == 256);
  for (size_t i = 0; i < back.data.size(); ++i)
    CHECK(std::abs(int(back.data[i]) - 181) <= 1);
}

TEST_CASE("dct: quality 100 on noise exceeds 45 dB") {
  Image8 img = testutil::random_image(128, 128, 4);
  EncodedPayload p = dct_encode_image(img, 100);
  Image8 back = dct_decode_image(p);
  CHECK(psnr(img, back) > 45.0);
}

TEST_CASE("dct: quality sweep decreases payload size") {
  Image8 img = make_natural_image(256, 256, 5);
  size_t prev = SIZE_MAX;
  for (int q : {90, 50, 10}) {
    EncodedPayload p = dct_encode_image(img, q);
    CHECK(p.byte_length() < prev);
    prev = p.byte_length();
    Image8 back = dct_decode_image(p);
    CHECK(back.width == img.width);
    CHECK(back.height == img.height);
  }
}

TEST_CASE("dct: deterministic encode") {
  Image8 img = make_natural_image(64, 64, 6);
  CHECK(dct_encode_image(img, 40).serialize() == dct_encode_image(img, 40).serialize());
}

TEST_CASE("dct: non-multiple-of-8 dims round trip via reflection padding") {
  Image8 img = make_natural_image(61, 45, 7);
  EncodedPayload p = dct_encode_image(img, 90);
  CHECK((p.flags & kPayloadFlagPadWidth) != 0);
  CHECK((p.flags & kPayloadFlagPadHeight) != 0);
  Image8 back = dct_decode_image(p);
  CHECK(back.width == 61);
  CHECK(back.height == 45);
  CHECK(psnr(img, back) > 30.0);
}

TEST_CASE("dct: codec mismatch and corrupt payloads error") {
  Image8 img = make_natural_image(32, 32, 8);
  EncodedPayload p = dct_encode_image(img, 50);
  EncodedPayload wrong = p;
  wrong.codec = CodecId::learned_ae;
  CHECK_THROWS_AS(dct_decode_image(wrong), Error);

  EncodedPayload corrupt = p;
  corrupt.body.resize(corrupt.body.size() / 2);
  CHECK_THROWS_AS(dct_decode_image(corrupt), Error);

  EncodedPayload empty_img;
  CHECK_THROWS_AS(dct_encode_image(Image8{}, 50), Error);
}

TEST_CASE("dct grid: occupancy is lossless and values match closely") {
  ScanSpec spec;
  spec.rings = 64;
  spec.azimuth_steps = 1024;
  PointCloud cloud = make_scan(spec, 11);
  GridConfig cfg;
  RangeGrid grid = pointcloud_to_grid(cloud, cfg);
  NormalizedGrid ngrid = normalize_grid(grid);

  EncodedPayload p = dct_encode_grid(ngrid, 85);
  CHECK(p.is_grid());
  NormalizedGrid back = dct_decode_grid(p, cfg);
  REQUIRE(back.occupancy == ngrid.occupancy);
  REQUIRE(back.values.size() == ngrid.values.size());

  RangeGrid recon = denormalize_grid(back);
  GridDistance d = mean_euclidean_distance(grid, recon);
  CHECK(d.compared_bins == grid.occupied_count());
  CHECK(d.mean_m < 2.0);

  // an image decoder must refuse a grid payload and vice versa
  CHECK_THROWS_AS(dct_decode_image(p), Error);
  EncodedPayload img_payload = dct_encode_image(make_natural_image(32, 32, 1), 50);
  CHECK_THROWS_AS(dct_decode_grid(img_payload), Error);
}

TEST_CASE("dct grid: rate knob moves euclidean distance monotonically") {
  ScanSpec spec;
  spec.rings = 32;
  spec.azimuth_steps = 512;
  GridConfig cfg;
  cfg.rows = 32;
  cfg.cols = 256;
  RangeGrid grid = pointcloud_to_grid(make_scan(spec, 12), cfg);
  NormalizedGrid ngrid = normalize_grid(grid);
  double prev_dist = 1e9;
  size_t prev_bytes = 0;
  for (int q : {10, 50, 90}) {
    EncodedPayload p = dct_encode_grid(ngrid, q);
    CHECK(p.byte_length() > prev_bytes);
    prev_bytes = p.byte_length();
    RangeGrid recon = denormalize_grid(dct_decode_grid(p, cfg));
    double dist = mean_euclidean_distance(grid, recon).mean_m;
    CHECK(dist < prev_dist);
    prev_dist = dist;
  }
}
