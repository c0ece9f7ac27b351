#include <benchmark/benchmark.h>

#include "pqbench/dilithium.hpp"
#include "pqbench/keccak.hpp"
#include "pqbench/kyber.hpp"

#include <array>

using namespace pqbench;

static void Shake128_1KiB(benchmark::State& state) {
  const Bytes msg(1024, 0xA5);
  Bytes out(168);
  for (auto _ : state) {
    keccak::shake128(out, msg);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetBytesProcessed(static_cast<int64_t>(state.iterations()) * 1024);
}
BENCHMARK(Shake128_1KiB);

static void KyberKeygen(benchmark::State& state) {
  const auto& params = kyber::params_for_level(static_cast<int>(state.range(0)));
  const auto backend = static_cast<Backend>(state.range(1));
  if (backend == Backend::accelerated && !accelerated_available()) {
    state.SkipWithError("no accelerated backend");
    return;
  }
  const std::array<std::uint8_t, 32> d{1}, z{2};
  for (auto _ : state) {
    auto kp = kyber::keygen(params, d, z, backend);
    benchmark::DoNotOptimize(kp);
  }
}

static void KyberEncaps(benchmark::State& state) {
  const auto& params = kyber::params_for_level(static_cast<int>(state.range(0)));
  const auto backend = static_cast<Backend>(state.range(1));
  if (backend == Backend::accelerated && !accelerated_available()) {
    state.SkipWithError("no accelerated backend");
    return;
  }
  const auto kp = kyber::keygen(params, Backend::reference);
  const std::array<std::uint8_t, 32> m{3};
  for (auto _ : state) {
    auto enc = kyber::encapsulate(params, kp.public_key, m, backend);
    benchmark::DoNotOptimize(enc);
  }
}

static void KyberDecaps(benchmark::State& state) {
  const auto& params = kyber::params_for_level(static_cast<int>(state.range(0)));
  const auto backend = static_cast<Backend>(state.range(1));
  if (backend == Backend::accelerated && !accelerated_available()) {
    state.SkipWithError("no accelerated backend");
    return;
  }
  const auto kp = kyber::keygen(params, Backend::reference);
  const auto enc = kyber::encapsulate(params, kp.public_key, Backend::reference);
  for (auto _ : state) {
    auto ss = kyber::decapsulate(params, kp.secret_key, enc.ciphertext, backend);
    benchmark::DoNotOptimize(ss);
  }
}

#define KYBER_ARGS ArgsProduct({{512, 768, 1024}, {0, 1}})
BENCHMARK(KyberKeygen)->KYBER_ARGS;
BENCHMARK(KyberEncaps)->KYBER_ARGS;
BENCHMARK(KyberDecaps)->KYBER_ARGS;

namespace {

bool skip_unavailable(benchmark::State& state, Backend backend) {
  if (backend == Backend::accelerated && !accelerated_available()) {
    state.SkipWithError("no accelerated backend");
    return true;
  }
  return false;
}

}  // namespace

static void DilithiumKeygen(benchmark::State& state) {
  const auto& params = dilithium::params_for_level(static_cast<int>(state.range(0)));
  const auto backend = static_cast<Backend>(state.range(1));
  if (skip_unavailable(state, backend)) return;
  const std::array<std::uint8_t, 32> seed{4};
  for (auto _ : state) {
    auto kp = dilithium::keygen(params, seed, backend);
    benchmark::DoNotOptimize(kp);
  }
}

static void DilithiumSign(benchmark::State& state) {
  const auto& params = dilithium::params_for_level(static_cast<int>(state.range(0)));
  const auto backend = static_cast<Backend>(state.range(1));
  if (skip_unavailable(state, backend)) return;
  const auto kp = dilithium::keygen(params, std::array<std::uint8_t, 32>{5}, Backend::reference);
  // vary the message so the rejection-loop count averages out
  Bytes msg(32, 0);
  for (auto _ : state) {
    ++msg[0];
    auto sig = dilithium::sign(params, kp.secret_key, msg, backend);
    benchmark::DoNotOptimize(sig);
  }
}

static void DilithiumVerify(benchmark::State& state) {
  const auto& params = dilithium::params_for_level(static_cast<int>(state.range(0)));
  const auto backend = static_cast<Backend>(state.range(1));
  if (skip_unavailable(state, backend)) return;
  const auto kp = dilithium::keygen(params, std::array<std::uint8_t, 32>{6}, Backend::reference);
  const Bytes msg(32, 7);
  const auto sig = dilithium::sign(params, kp.secret_key, msg, Backend::reference);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dilithium::verify(params, kp.public_key, msg, sig, backend));
  }
}

#define DILITHIUM_ARGS ArgsProduct({{2, 3, 5}, {0, 1}})
BENCHMARK(DilithiumKeygen)->DILITHIUM_ARGS;
BENCHMARK(DilithiumSign)->DILITHIUM_ARGS;
BENCHMARK(DilithiumVerify)->DILITHIUM_ARGS;

BENCHMARK_MAIN();
