#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rasc/common.hpp"

namespace rasc {

// Static frequency table over a contiguous symbol alphabet. Counts are kept
// >= 1 for every symbol and the total is capped so the coder's per-symbol
// rounding loss stays far below a bit.
class FrequencyModel {
public:
  static constexpr uint32_t kMaxTotal = 1u << 13;
  static constexpr uint32_t kMaxAlphabet = 65535;

  // Normalizes counts so that every symbol keeps weight >= 1 and the total
  // stays near kMaxTotal. Counts of zero are lifted to one first.
  static FrequencyModel from_counts(std::span<const uint64_t> counts);
  static FrequencyModel from_symbols(std::span<const uint32_t> symbols, size_t alphabet_size);
  static FrequencyModel uniform(size_t alphabet_size);

  size_t alphabet_size() const { return cum_.size() - 1; }
  uint32_t total() const { return cum_.back(); }
  uint32_t cum(size_t s) const { return cum_[s]; }
  uint32_t freq(size_t s) const { return cum_[s + 1] - cum_[s]; }

  // Largest symbol s with cum(s) <= target < cum(s+1).
  size_t find(uint32_t target) const { return lut_[target]; }

  // Wire layout: u16 alphabet_size, then alphabet_size u32 counts.
  void serialize(std::vector<uint8_t>& out) const;
  static FrequencyModel deserialize(ByteReader& reader);

private:
  FrequencyModel() = default;
  void build_lut();

  std::vector<uint32_t> cum_;   // alphabet_size + 1 entries, cum_[0] = 0
  std::vector<uint16_t> lut_;   // target -> symbol, one entry per count unit
};

struct Bitstream {
  std::vector<uint8_t> bytes;
  uint64_t bit_length = 0;
};

// Byte-oriented range coder, 32-bit range with 64-bit low for carry
// propagation and byte-wise renormalization. The encoder emits exactly the
// bytes the decoder consumes, so truncation is always detected.
class RangeEncoder {
public:
  void encode(uint32_t cum, uint32_t freq, uint32_t total);
  Bitstream finish();

private:
  void shift_low();

  static constexpr uint32_t kTop = 1u << 24;
  uint64_t low_ = 0;
  uint32_t range_ = 0xFFFFFFFFu;
  uint8_t cache_ = 0;
  uint64_t cache_size_ = 1;
  std::vector<uint8_t> out_;
};

class RangeDecoder {
public:
  explicit RangeDecoder(std::span<const uint8_t> bytes);

  size_t decode(const FrequencyModel& model);
  size_t consumed() const { return pos_; }

private:
  uint8_t next_byte();

  static constexpr uint32_t kTop = 1u << 24;
  std::span<const uint8_t> in_;
  size_t pos_ = 0;
  uint32_t range_ = 0xFFFFFFFFu;
  uint32_t code_ = 0;
};

Bitstream range_encode(std::span<const uint32_t> symbols, const FrequencyModel& model);
std::vector<uint32_t> range_decode(const Bitstream& stream, const FrequencyModel& model, size_t n);
std::vector<uint32_t> range_decode(std::span<const uint8_t> bytes, const FrequencyModel& model,
                                   size_t n);

// Ideal code length: sum of -log2 p(symbol) under the model.
double estimate_bits(std::span<const uint32_t> symbols, const FrequencyModel& model);

}  // namespace rasc
