#include "rdac/ppm.hpp"

#include <algorithm>
#include <string>

#include "rdac/error.hpp"
#include "rdac/range_coder.hpp"

namespace rdac {

namespace {

constexpr std::size_t kHeaderBytes = 4;
// Declared lengths above this are rejected before any allocation.
constexpr std::uint64_t kMaxDeclaredLength = 1ull << 31;

}  // namespace

PpmModel::PpmModel(int max_order) : max_order_(max_order) {
  if (max_order < 0 || max_order > kMaxPpmOrder)
    throw Error(ErrorCode::invalid_argument, "ppm order must be in 0.." +
                                                 std::to_string(kMaxPpmOrder));
}

void PpmModel::Context::increment(std::uint8_t s) {
  auto it = std::lower_bound(symbols.begin(), symbols.end(), s,
                             [](const auto& e, std::uint8_t v) { return e.first < v; });
  if (it != symbols.end() && it->first == s)
    ++it->second;
  else
    symbols.insert(it, {s, 1});
  ++total;
  if (total > kPpmRescaleThreshold) {
    total = 0;
    for (auto& e : symbols) {
      e.second = static_cast<std::uint16_t>((e.second + 1) / 2);
      total += e.second;
    }
  }
}

std::uint64_t PpmModel::key(int order) const {
  std::uint64_t k = static_cast<std::uint64_t>(order) << 56;
  const std::size_t n = history_.size();
  for (int i = 0; i < order; ++i) k |= static_cast<std::uint64_t>(history_[n - 1 - i]) << (8 * i);
  return k;
}

PpmModel::Context* PpmModel::find(int order) {
  auto it = contexts_.find(key(order));
  return it == contexts_.end() ? nullptr : &it->second;
}

int PpmModel::available_order() const {
  return std::min<int>(max_order_, static_cast<int>(history_.size()));
}

void PpmModel::update(std::uint8_t symbol) {
  for (int order = 0; order <= available_order(); ++order) contexts_[key(order)].increment(symbol);
  history_.push_back(symbol);
  if (static_cast<int>(history_.size()) > max_order_) history_.erase(history_.begin());
}

void PpmModel::encode(RangeEncoder& enc, std::uint8_t symbol) {
  bool coded = false;
  for (int order = available_order(); order >= 0 && !coded; --order) {
    const Context* ctx = find(order);
    if (!ctx || ctx->symbols.empty()) continue;
    const std::uint32_t total = ctx->total + ctx->escape();
    std::uint32_t cum = 0;
    for (const auto& [s, count] : ctx->symbols) {
      if (s == symbol) {
        enc.encode(cum, count, total);
        coded = true;
        break;
      }
      cum += count;
    }
    if (!coded) enc.encode(ctx->total, ctx->escape(), total);
  }
  if (!coded) enc.encode(symbol, 1, 256);
  update(symbol);
}

std::uint8_t PpmModel::decode(RangeDecoder& dec) {
  for (int order = available_order(); order >= 0; --order) {
    const Context* ctx = find(order);
    if (!ctx || ctx->symbols.empty()) continue;
    const std::uint32_t total = ctx->total + ctx->escape();
    const std::uint32_t target = dec.decode_freq(total);
    if (target >= ctx->total) {
      dec.decode(ctx->total, ctx->escape());
      continue;
    }
    std::uint32_t cum = 0;
    for (const auto& [s, count] : ctx->symbols) {
      if (target < cum + count) {
        dec.decode(cum, count);
        update(s);
        return s;
      }
      cum += count;
    }
  }
  const auto symbol = static_cast<std::uint8_t>(dec.decode_freq(256));
  dec.decode(symbol, 1);
  update(symbol);
  return symbol;
}

std::uint64_t PpmModel::fingerprint() const {
  std::uint64_t digest = 0;
  for (const auto& [k, ctx] : contexts_) {
    std::uint64_t h = k * 0x9E3779B97F4A7C15ull ^ ctx.total;
    for (const auto& [s, count] : ctx.symbols) {
      h ^= (static_cast<std::uint64_t>(s) << 16 | count) + 0x632BE59BD9B4E019ull + (h << 6) +
           (h >> 2);
    }
    digest += h * 0xBF58476D1CE4E5B9ull;  // commutative over map iteration order
  }
  return digest;
}

std::vector<std::uint8_t> ppm_encode(std::span<const std::uint8_t> bytes, int max_order) {
  if (bytes.size() > 0xFFFFFFFFull)
    throw Error(ErrorCode::invalid_argument, "ppm input must be shorter than 2^32 bytes");
  std::vector<std::uint8_t> out;
  const auto n = static_cast<std::uint32_t>(bytes.size());
  out.push_back(static_cast<std::uint8_t>(n >> 24));
  out.push_back(static_cast<std::uint8_t>(n >> 16));
  out.push_back(static_cast<std::uint8_t>(n >> 8));
  out.push_back(static_cast<std::uint8_t>(n));
  if (bytes.empty()) return out;

  PpmModel model(max_order);
  RangeEncoder enc(out);
  for (auto b : bytes) model.encode(enc, b);
  enc.finish();
  return out;
}

std::vector<std::uint8_t> ppm_decode(std::span<const std::uint8_t> stream, int max_order) {
  if (stream.size() < kHeaderBytes)
    throw Error(ErrorCode::truncated_stream, "payload shorter than its length header");
  const std::uint64_t n = (std::uint64_t(stream[0]) << 24) | (std::uint64_t(stream[1]) << 16) |
                          (std::uint64_t(stream[2]) << 8) | std::uint64_t(stream[3]);
  if (n == 0) return {};
  if (n > kMaxDeclaredLength)
    throw Error(ErrorCode::length_overrun, "declared length " + std::to_string(n));

  PpmModel model(max_order);
  RangeDecoder dec(stream.subspan(kHeaderBytes));
  std::vector<std::uint8_t> out;
  out.reserve(std::min<std::uint64_t>(n, 1u << 20));
  try {
    for (std::uint64_t i = 0; i < n; ++i) out.push_back(model.decode(dec));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::truncated_stream) throw;
    throw Error(ErrorCode::truncated_stream,
                "decoded " + std::to_string(out.size()) + " of " + std::to_string(n) +
                    " declared bytes");
  }
  return out;
}

std::uint64_t estimate_bits(std::span<const std::uint8_t> bytes, int max_order) {
  return 8ull * (ppm_encode(bytes, max_order).size() - kHeaderBytes);
}

}  // namespace rdac
