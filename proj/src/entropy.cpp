#include "rasc/entropy.hpp"

#include <algorithm>
#include <cmath>

namespace rasc {

FrequencyModel FrequencyModel::from_counts(std::span<const uint64_t> counts) {
  require(!counts.empty(), Status::invalid_argument, "empty alphabet");
  require(counts.size() <= kMaxAlphabet, Status::invalid_argument, "alphabet too large");
  uint64_t total = 0;
  for (uint64_t c : counts) total += std::max<uint64_t>(c, 1);
  FrequencyModel m;
  m.cum_.resize(counts.size() + 1);
  m.cum_[0] = 0;
  if (total <= kMaxTotal) {
    for (size_t s = 0; s < counts.size(); ++s)
      m.cum_[s + 1] = m.cum_[s] + uint32_t(std::max<uint64_t>(counts[s], 1));
  } else {
    for (size_t s = 0; s < counts.size(); ++s) {
      uint64_t c = std::max<uint64_t>(counts[s], 1);
      uint64_t scaled = std::max<uint64_t>(c * kMaxTotal / total, 1);
      m.cum_[s + 1] = m.cum_[s] + uint32_t(scaled);
    }
  }
  m.build_lut();
  return m;
}

FrequencyModel FrequencyModel::from_symbols(std::span<const uint32_t> symbols,
                                            size_t alphabet_size) {
  require(alphabet_size >= 1, Status::invalid_argument, "empty alphabet");
  std::vector<uint64_t> counts(alphabet_size, 1);  // Laplace smoothing
  for (uint32_t s : symbols) {
    require(s < alphabet_size, Status::invalid_argument, "symbol out of alphabet");
    counts[s] += 1;
  }
  return from_counts(counts);
}

FrequencyModel FrequencyModel::uniform(size_t alphabet_size) {
  std::vector<uint64_t> counts(alphabet_size, 1);
  return from_counts(counts);
}

void FrequencyModel::build_lut() {
  lut_.resize(cum_.back());
  for (size_t s = 0; s + 1 < cum_.size(); ++s)
    for (uint32_t t = cum_[s]; t < cum_[s + 1]; ++t) lut_[t] = uint16_t(s);
}

void FrequencyModel::serialize(std::vector<uint8_t>& out) const {
  size_t a = alphabet_size();
  put_u16(out, uint16_t(a));
  for (size_t s = 0; s < a; ++s) put_u32(out, freq(s));
}

FrequencyModel FrequencyModel::deserialize(ByteReader& reader) {
  size_t a = reader.u16();
  require(a >= 1, Status::bad_format, "frequency model with empty alphabet");
  FrequencyModel m;
  m.cum_.resize(a + 1);
  m.cum_[0] = 0;
  uint64_t total = 0;
  for (size_t s = 0; s < a; ++s) {
    uint32_t f = reader.u32();
    require(f >= 1, Status::bad_format, "frequency model with zero count");
    total += f;
    require(total <= kMaxTotal + kMaxAlphabet, Status::bad_format, "frequency model total too large");
    m.cum_[s + 1] = m.cum_[s] + f;
  }
  m.build_lut();
  return m;
}

void RangeEncoder::shift_low() {
  if (uint32_t(low_ >> 32) != 0 || uint32_t(low_) < 0xFF000000u) {
    uint8_t carry = uint8_t(low_ >> 32);
    do {
      out_.push_back(uint8_t(cache_ + carry));
      cache_ = 0xFF;
    } while (--cache_size_ != 0);
    cache_ = uint8_t(low_ >> 24);
  }
  ++cache_size_;
  low_ = (low_ & 0x00FFFFFFu) << 8;  // the discarded byte is owed via cache_size_
}

void RangeEncoder::encode(uint32_t cum, uint32_t freq, uint32_t total) {
  require(freq > 0 && total > 0 && cum + freq <= total, Status::invalid_argument,
          "invalid coding interval");
  uint32_t r = range_ / total;
  low_ += uint64_t(r) * cum;
  range_ = r * freq;
  while (range_ < kTop) {
    shift_low();
    range_ <<= 8;
  }
}

Bitstream RangeEncoder::finish() {
  for (int i = 0; i < 5; ++i) shift_low();
  Bitstream stream;
  stream.bytes = std::move(out_);
  stream.bit_length = uint64_t(stream.bytes.size()) * 8;
  return stream;
}

RangeDecoder::RangeDecoder(std::span<const uint8_t> bytes) : in_(bytes) {
  next_byte();  // lead byte, always zero
  for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | next_byte();
}

uint8_t RangeDecoder::next_byte() {
  if (pos_ >= in_.size()) fail(Status::bad_format, "truncated range-coded stream");
  return in_[pos_++];
}

size_t RangeDecoder::decode(const FrequencyModel& model) {
  uint32_t total = model.total();
  uint32_t r = range_ / total;
  uint32_t target = std::min(total - 1, code_ / r);
  size_t symbol = model.find(target);
  uint32_t cum = model.cum(symbol);
  code_ -= r * cum;
  range_ = r * model.freq(symbol);
  while (range_ < kTop) {
    code_ = (code_ << 8) | next_byte();
    range_ <<= 8;
  }
  return symbol;
}

Bitstream range_encode(std::span<const uint32_t> symbols, const FrequencyModel& model) {
  RangeEncoder enc;
  size_t a = model.alphabet_size();
  for (uint32_t s : symbols) {
    require(s < a, Status::invalid_argument, "symbol out of alphabet");
    enc.encode(model.cum(s), model.freq(s), model.total());
  }
  return enc.finish();
}

std::vector<uint32_t> range_decode(std::span<const uint8_t> bytes, const FrequencyModel& model,
                                   size_t n) {
  RangeDecoder dec(bytes);
  std::vector<uint32_t> out(n);
  for (size_t i = 0; i < n; ++i) out[i] = uint32_t(dec.decode(model));
  return out;
}

std::vector<uint32_t> range_decode(const Bitstream& stream, const FrequencyModel& model,
                                   size_t n) {
  return range_decode(std::span<const uint8_t>(stream.bytes), model, n);
}

double estimate_bits(std::span<const uint32_t> symbols, const FrequencyModel& model) {
  double total_bits = 0;
  double log2_total = std::log2(double(model.total()));
  size_t a = model.alphabet_size();
  for (uint32_t s : symbols) {
    require(s < a, Status::invalid_argument, "symbol out of alphabet");
    uint32_t f = model.freq(s);
    require(f > 0, Status::invalid_argument, "zero-probability symbol");
    total_bits += log2_total - std::log2(double(f));
  }
  return total_bits;
}

}  // namespace rasc
