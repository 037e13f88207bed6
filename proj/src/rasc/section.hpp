#pragma once

#include <algorithm>

#include "rasc/entropy.hpp"

namespace rasc {

// Payload building blocks shared by the codecs. A symbol section is an
// offset-mapped integer sequence: i32 minimum value, frequency table over
// the observed range, u32 coded byte count, range-coded bytes.

inline void write_symbol_section(std::vector<uint8_t>& out, std::span<const int32_t> values) {
  int32_t lo = 0, hi = 0;
  if (!values.empty()) {
    lo = hi = values[0];
    for (int32_t v : values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  uint64_t span = uint64_t(int64_t(hi) - lo) + 1;
  require(span <= FrequencyModel::kMaxAlphabet, Status::internal, "symbol range too wide");
  std::vector<uint32_t> mapped(values.size());
  for (size_t i = 0; i < values.size(); ++i) mapped[i] = uint32_t(values[i] - lo);
  FrequencyModel model = FrequencyModel::from_symbols(mapped, size_t(span));
  put_i32(out, lo);
  model.serialize(out);
  Bitstream coded = range_encode(mapped, model);
  put_u32(out, uint32_t(coded.bytes.size()));
  out.insert(out.end(), coded.bytes.begin(), coded.bytes.end());
}

inline std::vector<int32_t> read_symbol_section(ByteReader& r, size_t n) {
  int32_t lo = r.i32();
  FrequencyModel model = FrequencyModel::deserialize(r);
  uint32_t coded_len = r.u32();
  auto coded = r.bytes(coded_len);
  std::vector<uint32_t> mapped = range_decode(coded, model, n);
  std::vector<int32_t> values(n);
  for (size_t i = 0; i < n; ++i) {
    int64_t v = int64_t(lo) + mapped[i];
    require(v >= INT32_MIN && v <= INT32_MAX, Status::bad_format, "symbol out of range");
    values[i] = int32_t(v);
  }
  return values;
}

inline void write_occupancy_section(std::vector<uint8_t>& out,
                                    std::span<const uint8_t> occupancy) {
  std::vector<uint32_t> bits(occupancy.size());
  for (size_t i = 0; i < occupancy.size(); ++i) bits[i] = occupancy[i] ? 1 : 0;
  FrequencyModel model = FrequencyModel::from_symbols(bits, 2);
  model.serialize(out);
  Bitstream coded = range_encode(bits, model);
  put_u32(out, uint32_t(coded.bytes.size()));
  out.insert(out.end(), coded.bytes.begin(), coded.bytes.end());
}

inline std::vector<uint8_t> read_occupancy_section(ByteReader& r, size_t n) {
  FrequencyModel model = FrequencyModel::deserialize(r);
  require(model.alphabet_size() == 2, Status::bad_format, "occupancy model must be binary");
  uint32_t coded_len = r.u32();
  auto coded = r.bytes(coded_len);
  std::vector<uint32_t> bits = range_decode(coded, model, n);
  std::vector<uint8_t> occupancy(n);
  for (size_t i = 0; i < n; ++i) occupancy[i] = uint8_t(bits[i]);
  return occupancy;
}

}  // namespace rasc
