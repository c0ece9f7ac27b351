#include "pqbench/classical.hpp"

#include "pqbench/errors.hpp"

#include <algorithm>

namespace pqbench::classical {

std::string_view to_string(Op op) noexcept {
  switch (op) {
    case Op::keygen:
      return "keygen";
    case Op::agree:
      return "agree";
    case Op::sign:
      return "sign";
    case Op::verify:
      return "verify";
    case Op::encrypt:
      return "encrypt";
    case Op::decrypt:
      return "decrypt";
  }
  return "unknown";
}

const ClassicalScheme& scheme_by_id(std::string_view id) {
  if (id == "ecdsa-p512") id = "ecdsa-p521";
  for (const auto& s : kSchemes) {
    if (s.id == id) return s;
  }
  throw InputError("unknown classical scheme '" + std::string(id) + "'");
}

std::vector<Op> supported_ops(const ClassicalScheme& scheme) {
  if (scheme.family == "ecdh") return {Op::keygen, Op::agree};
  if (scheme.family == "ecdsa") return {Op::keygen, Op::sign, Op::verify};
  return {Op::keygen, Op::encrypt, Op::decrypt, Op::sign, Op::verify};
}

namespace {

std::size_t index_of(const ClassicalScheme& scheme) {
  for (std::size_t i = 0; i < kSchemes.size(); ++i) {
    if (kSchemes[i].id == scheme.id) return i;
  }
  return kSchemes.size();
}

}  // namespace

bool ProviderHandle::available(const ClassicalScheme& scheme) const noexcept {
  const std::size_t i = index_of(scheme);
  return i < caps_.size() && caps_[i];
}

std::size_t ProviderHandle::capability_count() const noexcept {
  return static_cast<std::size_t>(std::count(caps_.begin(), caps_.end(), true));
}

CompositionPolicy CompositionPolicy::defaults() {
  CompositionPolicy p;
  p.set("ecdh", {{Op::keygen, 2}, {Op::agree, 2}});
  p.set("ecdsa", {{Op::keygen, 1}, {Op::sign, 1}, {Op::verify, 1}});
  p.set("rsa", {{Op::encrypt, 1}, {Op::decrypt, 1}});
  return p;
}

void CompositionPolicy::set(std::string_view family, std::vector<WeightedOp> ops) {
  const ClassicalScheme* sample = nullptr;
  for (const auto& s : kSchemes) {
    if (s.family == family) sample = &s;
  }
  if (sample == nullptr) throw InputError("unknown classical family '" + std::string(family) + "'");
  if (ops.empty()) throw InputError("a composition needs at least one operation");
  const auto valid = supported_ops(*sample);
  for (const auto& w : ops) {
    if (std::find(valid.begin(), valid.end(), w.op) == valid.end()) {
      throw InputError(std::string(to_string(w.op)) + " is not an operation of " + std::string(family));
    }
    if (w.count == 0) throw InputError("operation weights must be positive");
  }
  for (auto& e : entries_) {
    if (e.first == family) {
      e.second = std::move(ops);
      return;
    }
  }
  entries_.emplace_back(std::string(family), std::move(ops));
}

const std::vector<WeightedOp>& CompositionPolicy::ops_for(std::string_view family) const {
  for (const auto& e : entries_) {
    if (e.first == family) return e.second;
  }
  throw InputError("no composition for '" + std::string(family) + "'");
}

bench::BenchReport run_classical(const ProviderHandle& handle, const ClassicalScheme& scheme,
                                 const bench::CampaignConfig& config, const CompositionPolicy& policy) {
  bench::BenchReport r;
  r.scheme = std::string(scheme.family);
  r.level = scheme.level;
  r.backend = std::string(bench::kProviderBackend);
  r.security_bits = scheme.claimed_security_bits;
  r.clock_hz = config.clock_hz;
  if (!handle.available(scheme)) {
    r.unavailable = "not supported by the crypto provider";
    return r;
  }
  if (!roundtrip_check(handle, scheme)) {
    r.unavailable = "provider failed the roundtrip check";
    return r;
  }
  for (const auto& w : policy.ops_for(scheme.family)) {
    const bench::Work work = run_classical_op(handle, scheme, w.op);
    r.rows.push_back(bench::measure(std::string(to_string(w.op)), work, config.iterations, config.warmup, config.clock));
    r.weights.push_back(w.count);
  }
  r.unit = r.rows.front().unit;
  return r;
}

}  // namespace pqbench::classical
