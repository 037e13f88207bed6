#include <doctest.h>

#include <cmath>

#include "rasc/entropy.hpp"
#include "rasc/rng.hpp"

using namespace rasc;

namespace {

FrequencyModel random_model(Rng& rng, size_t max_alphabet = 64) {
  size_t a = 2 + rng.below(uint32_t(max_alphabet - 1));
  std::vector<uint64_t> counts(a);
  for (auto& c : counts) c = 1 + rng.below(200);
  return FrequencyModel::from_counts(counts);
}

std::vector<uint32_t> sample_symbols(Rng& rng, const FrequencyModel& m, size_t n) {
  std::vector<uint32_t> out(n);
  for (auto& s : out) s = uint32_t(m.find(rng.below(m.total())));
  return out;
}

}  // namespace

TEST_CASE("frequency model: cumulative table and normalization") {
  std::vector<uint64_t> counts = {900, 100};
  FrequencyModel m = FrequencyModel::from_counts(counts);
  CHECK(m.alphabet_size() == 2);
  CHECK(m.total() == 1000);
  CHECK(m.freq(0) == 900);
  CHECK(m.cum(1) == 900);

  // large totals are scaled down but every symbol keeps weight >= 1
  std::vector<uint64_t> big(100, 1);
  big[0] = 1'000'000;
  FrequencyModel scaled = FrequencyModel::from_counts(big);
  CHECK(scaled.total() <= FrequencyModel::kMaxTotal + 100);
  for (size_t s = 0; s < 100; ++s) CHECK(scaled.freq(s) >= 1);
}

TEST_CASE("frequency model: wire round trip") {
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    FrequencyModel m = random_model(rng);
    std::vector<uint8_t> bytes;
    m.serialize(bytes);
    ByteReader r(bytes);
    FrequencyModel back = FrequencyModel::deserialize(r);
    REQUIRE(back.alphabet_size() == m.alphabet_size());
    CHECK(back.total() == m.total());
    for (size_t s = 0; s < m.alphabet_size(); ++s) CHECK(back.freq(s) == m.freq(s));
  }
  ByteReader empty{std::span<const uint8_t>{}};
  CHECK_THROWS_AS(FrequencyModel::deserialize(empty), Error);
}

TEST_CASE("range coder: empty sequence round trips") {
  FrequencyModel m = FrequencyModel::uniform(4);
  Bitstream stream = range_encode({}, m);
  CHECK(stream.bytes.size() == 5);  // flush only
  CHECK(range_decode(stream, m, 0).empty());
}

TEST_CASE("range coder: round trip identity over random models") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    FrequencyModel m = random_model(rng);
    size_t n = 1 + rng.below(10000);
    std::vector<uint32_t> symbols = sample_symbols(rng, m, n);
    Bitstream stream = range_encode(symbols, m);
    CHECK(range_decode(stream, m, n) == symbols);
  }
}

TEST_CASE("range coder: deterministic output") {
  Rng rng(12);
  FrequencyModel m = random_model(rng);
  std::vector<uint32_t> symbols = sample_symbols(rng, m, 5000);
  Bitstream a = range_encode(symbols, m);
  Bitstream b = range_encode(symbols, m);
  CHECK(a.bytes == b.bytes);
}

TEST_CASE("range coder: skewed 0.9/0.1 source codes near entropy") {
  FrequencyModel m = FrequencyModel::from_counts(std::vector<uint64_t>{900, 100});
  Rng rng(13);
  std::vector<uint32_t> symbols;
  for (int i = 0; i < 1000; ++i) symbols.push_back(rng.uniform() < 0.9 ? 0 : 1);
  double ideal = estimate_bits(symbols, m);
  Bitstream stream = range_encode(symbols, m);
  double coded_bits = double(stream.bytes.size()) * 8;
  CHECK(coded_bits >= ideal);
  CHECK(coded_bits <= ideal * 1.01 + 64.0);
  // the Shannon oracle for the exact 900/100 composition
  double shannon = -(900.0 * std::log2(0.9) + 100.0 * std::log2(0.1));
  CHECK(shannon == doctest::Approx(469.0).epsilon(0.001));
}

TEST_CASE("range coder: coded length within [0,64] bits of the model estimate") {
  Rng rng(14);
  for (int trial = 0; trial < 30; ++trial) {
    FrequencyModel m = random_model(rng, 256);
    size_t n = 100 + rng.below(4000);
    std::vector<uint32_t> symbols = sample_symbols(rng, m, n);
    double ideal = estimate_bits(symbols, m);
    double coded = double(range_encode(symbols, m).bytes.size()) * 8;
    CHECK(coded - ideal >= 0.0);
    CHECK(coded - ideal <= 64.0);
  }
}

TEST_CASE("range coder: truncated stream errors") {
  Rng rng(15);
  FrequencyModel m = random_model(rng);
  std::vector<uint32_t> symbols = sample_symbols(rng, m, 500);
  Bitstream stream = range_encode(symbols, m);
  stream.bytes.pop_back();
  CHECK_THROWS_AS(range_decode(stream, m, 500), Error);
}

TEST_CASE("range coder: out-of-alphabet symbol rejected") {
  FrequencyModel m = FrequencyModel::uniform(4);
  std::vector<uint32_t> bad = {0, 1, 7};
  CHECK_THROWS_AS(range_encode(bad, m), Error);
}

TEST_CASE("estimate_bits: closed-form cases") {
  FrequencyModel uniform256 = FrequencyModel::uniform(256);
  std::vector<uint32_t> symbols(100, 42);
  CHECK(estimate_bits(symbols, uniform256) == doctest::Approx(800.0));

  FrequencyModel single = FrequencyModel::uniform(1);
  std::vector<uint32_t> zeros(50, 0);
  CHECK(estimate_bits(zeros, single) == doctest::Approx(0.0));

  FrequencyModel skew = FrequencyModel::from_counts(std::vector<uint64_t>{900, 100});
  Rng rng(16);
  std::vector<uint32_t> seq;
  for (int i = 0; i < 900; ++i) seq.push_back(0);
  for (int i = 0; i < 100; ++i) seq.push_back(1);
  CHECK(estimate_bits(seq, skew) == doctest::Approx(469.0).epsilon(0.001));
}
