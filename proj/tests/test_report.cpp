#include <doctest.h>

#include <fstream>

#include "rasc/io.hpp"
#include "rasc/report.hpp"
#include "rasc/synthetic.hpp"
#include "rasc/train.hpp"
#include "test_util.hpp"

using namespace rasc;

namespace {

void write_corpus(const testutil::TempDir& dir, size_t n, uint32_t size = 64) {
  for (size_t i = 0; i < n; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "img_%02zu.ppm", i);
    save_image(make_natural_image(size, size, 900 + i), dir.file(name));
  }
}

}  // namespace

TEST_CASE("rd sweep: row count, ordering, determinism") {
  testutil::TempDir dir;
  write_corpus(dir, 3);
  SweepSpec spec;
  spec.codec = CodecId::block_dct;
  spec.qualities = {20, 50, 80, 95};
  spec.input_dir = dir.path();
  spec.output_csv = dir.file("sweep.csv");
  SweepResult result = run_rd_sweep(spec);
  CHECK(result.rows.size() == 12);  // 3 images x 4 qualities
  for (size_t i = 1; i < result.rows.size(); ++i)
    CHECK(result.rows[i - 1].metrics.bpp <= result.rows[i].metrics.bpp);

  CHECK(result.csv.rfind("bpp,mse,psnr,ms_ssim\n", 0) == 0);

  SweepResult again = run_rd_sweep(spec);
  CHECK(result.csv == again.csv);

  auto bytes = read_file(dir.file("sweep.csv"));
  CHECK(std::string(bytes.begin(), bytes.end()) == result.csv);
}

TEST_CASE("rd sweep: psnr non-decreasing with bpp per image") {
  testutil::TempDir dir;
  write_corpus(dir, 1);
  SweepSpec spec;
  spec.qualities = {10, 40, 70, 95};
  spec.input_dir = dir.path();
  SweepResult result = run_rd_sweep(spec);
  double prev = -1;
  for (const RdRow& row : result.rows) {
    CHECK(row.metrics.psnr >= prev);
    prev = row.metrics.psnr;
  }
}

TEST_CASE("rd sweep: lpips sidecar adds the column") {
  testutil::TempDir dir;
  write_corpus(dir, 1);
  {
    std::ofstream out(dir.file("lpips.csv"));
    out << "image,tag,lpips\n";
    out << "img_00,q50,0.123\n";
  }
  SweepSpec spec;
  spec.qualities = {50, 90};
  spec.input_dir = dir.path();
  spec.lpips_sidecar = dir.file("lpips.csv");
  SweepResult result = run_rd_sweep(spec);
  CHECK(result.csv.rfind("bpp,mse,psnr,ms_ssim,lpips\n", 0) == 0);
  CHECK(result.csv.find("0.123000") != std::string::npos);
}

TEST_CASE("rd sweep: validation errors") {
  testutil::TempDir dir;
  write_corpus(dir, 1);
  SweepSpec spec;
  spec.qualities = {50};
  spec.input_dir = dir.path();
  CHECK_THROWS_AS(run_rd_sweep(spec), Error);  // one rate point is not a sweep

  SweepSpec ae;
  ae.codec = CodecId::learned_ae;
  ae.q_scales = {1.0, 2.0};
  ae.model_paths = {dir.file("missing.raem")};
  ae.input_dir = dir.path();
  CHECK_THROWS_AS(run_rd_sweep(ae), Error);  // checkpoint must exist
}

TEST_CASE("rd sweep: learned codec over quantization scales") {
  testutil::TempDir dir;
  write_corpus(dir, 2, 32);
  std::vector<Image8> dataset;
  for (uint64_t s = 0; s < 2; ++s) dataset.push_back(make_natural_image(32, 32, 900 + s));
  TrainConfig cfg;
  cfg.steps = 30;
  cfg.batch = 2;
  cfg.crop = 16;
  cfg.hidden_channels = 6;
  cfg.latent_channels = 3;
  cfg.seed = 3;
  TrainResult trained = train_ae(dataset, cfg);
  trained.model.save(dir.file("model.raem"));

  SweepSpec spec;
  spec.codec = CodecId::learned_ae;
  spec.model_paths = {dir.file("model.raem")};
  spec.q_scales = {0.5, 1.0, 2.0};
  spec.input_dir = dir.path();
  SweepResult result = run_rd_sweep(spec);
  CHECK(result.rows.size() == 6);
}

TEST_CASE("eval detections: fixture arithmetic and KDE mode") {
  testutil::TempDir dir;
  {
    std::ofstream out(dir.file("report.txt"));
    out << "a orig 0 count 1\n"
        << "a recon 0.5 count 0\n"   // -100
        << "b orig 0 count 2\n"
        << "b recon 0.5 count 1\n"   // -50
        << "c orig 0 count 3\n"
        << "c recon 0.5 count 3\n"   // 0
        << "d orig 0 count 5\n"
        << "d recon 0.5 count 5\n";  // 0
  }
  DetectionEvalConfig cfg;
  cfg.report_path = dir.file("report.txt");
  cfg.output_path = dir.file("eval.csv");
  DetectionEval eval = evaluate_detections(cfg);
  CHECK(eval.included == 4);
  REQUIRE(eval.buckets.size() == 1);
  CHECK(eval.buckets[0].mean_error == doctest::Approx(-37.5));
  CHECK(eval.buckets[0].share_minus100 == doctest::Approx(0.25));
  CHECK(eval.buckets[0].share_zero == doctest::Approx(0.5));
  CHECK(eval.error_grid.size() == 201);
}

TEST_CASE("eval detections: all-zero errors produce a point mass at 0") {
  testutil::TempDir dir;
  {
    std::ofstream out(dir.file("report.txt"));
    out << "a orig 0 count 2\na recon 0.4 count 2\n";
    out << "b orig 0 count 3\nb recon 0.4 count 3\n";
  }
  DetectionEvalConfig cfg;
  cfg.report_path = dir.file("report.txt");
  DetectionEval eval = evaluate_detections(cfg);
  size_t mode = 0;
  for (size_t i = 1; i < eval.density.size(); ++i)
    if (eval.density[i] > eval.density[mode]) mode = i;
  CHECK(eval.error_grid[mode] == 0.0);
}

TEST_CASE("eval detections: everything excluded is an error, no output file") {
  testutil::TempDir dir;
  {
    std::ofstream out(dir.file("report.txt"));
    out << "a orig 0 count 0\na recon 0.4 count 2\n";
  }
  DetectionEvalConfig cfg;
  cfg.report_path = dir.file("report.txt");
  cfg.output_path = dir.file("eval.csv");
  CHECK_THROWS_AS(evaluate_detections(cfg), Error);
  CHECK_FALSE(std::ifstream(dir.file("eval.csv")).good());
}

TEST_CASE("timing csv: stable columns and empty cells for missing stages") {
  std::vector<TimingRecord> records(1);
  records[0].frame_id = 3;
  records[0].t_capture_ns = 12345;
  records[0].t_preprocess_ms = 1.5;
  records[0].t_encode_ms = 2.0;
  records[0].t_serialize_ms = 0.25;
  records[0].t_network_ms = -1;  // unavailable
  records[0].t_decode_ms = 4.0;
  records[0].payload_bytes = 100;
  records[0].bpp = 0.5;
  BenchReport report = aggregate_timings(records, 300.0);
  std::string csv = timing_csv(records, report);
  CHECK(csv.rfind("frame_id,sensor,t_capture_ns,t_preprocess_ms,t_encode_ms,t_serialize_ms,"
                  "t_network_ms,t_decode_ms,end_to_end_ms,wall_ms,payload_bytes,bpp\n",
                  0) == 0);
  CHECK(csv.find("3,camera,12345,1.500000,2.000000,0.250000,,4.000000,7.750000,,100,0.500000\n") !=
        std::string::npos);
  CHECK(csv.find("# fps,") != std::string::npos);
}
