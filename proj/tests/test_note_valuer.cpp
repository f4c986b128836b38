#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <thread>
#include <vector>

#include "autohedge/note_valuer.hpp"

using namespace autohedge;

namespace {

PricerConfig cached(long paths = 500) {
  PricerConfig c;
  c.n_mc_paths = paths;
  c.valuation_cache = true;
  return c;
}

}  // namespace

TEST_CASE("without the cache the valuer is the Monte Carlo pricer") {
  PricerConfig cfg;
  cfg.n_mc_paths = 300;
  const NoteValuer nv(AutocallableSpec{}, SabrParams{}, cfg, 5);
  const RngStream rng(1, 2);
  for (double t : {0.0, 1.0 / 12.0, 0.3}) {
    const Valuation a = nv.value(97.0, 0.22, t, rng);
    const Valuation b = price_autocallable_mc(AutocallableSpec{}, 97.0, 0.22, t, SabrParams{}, cfg, rng);
    CHECK(a.price == b.price);
    CHECK(a.gamma == b.gamma);
  }
  CHECK(nv.cached_nodes() == 0);
}

TEST_CASE("cache nodes reproduce their own valuation") {
  const PricerConfig cfg = cached();
  const NoteValuer nv(AutocallableSpec{}, SabrParams{}, cfg, 77);
  const double spot = 100.0 * std::exp(2 * cfg.cache_log_spot_step);
  const Valuation v = nv.value(spot, 0.2, 1.0 / 12.0, RngStream(0, 0));
  CHECK(nv.cached_nodes() >= 1);
  CHECK(std::isfinite(v.price));
  // The same node, asked again with a different caller stream, is unchanged.
  const Valuation w = nv.value(spot, 0.2, 1.0 / 12.0, RngStream(9, 9));
  CHECK(w.price == v.price);
  CHECK(w.delta == v.delta);
}

TEST_CASE("interpolated values lie between the surrounding nodes") {
  const PricerConfig cfg = cached();
  const NoteValuer nv(AutocallableSpec{}, SabrParams{}, cfg, 3);
  const double step = cfg.cache_log_spot_step;
  const RngStream rng(0, 0);
  const double lo = nv.value(100.0 * std::exp(-step), 0.2, 2.0 / 12.0, rng).price;
  const double hi = nv.value(100.0, 0.2, 2.0 / 12.0, rng).price;
  for (double w : {0.1, 0.5, 0.9}) {
    const double s = 100.0 * std::exp(-step * (1.0 - w));
    const double v = nv.value(s, 0.2, 2.0 / 12.0, rng).price;
    CHECK(v == doctest::Approx((1 - w) * lo + w * hi).epsilon(1e-12));
  }
}

TEST_CASE("off-grid times and zero vol bypass the cache") {
  const PricerConfig cfg = cached(200);
  const NoteValuer nv(AutocallableSpec{}, SabrParams{}, cfg, 3);
  const RngStream rng(4, 4);
  const Valuation a = nv.value(101.0, 0.2, 0.1, rng);
  const Valuation b = price_autocallable_mc(AutocallableSpec{}, 101.0, 0.2, 0.1, SabrParams{}, cfg, rng);
  CHECK(a.price == b.price);
  CHECK(nv.cached_nodes() == 0);
  SabrParams flat;
  flat.sigma0 = 0.0;
  flat.nu = 0.0;
  const NoteValuer z(AutocallableSpec{}, flat, cfg, 3);
  CHECK(z.value(100.0, 0.0, 0.0, rng).price == doctest::Approx(105.7).epsilon(1e-13));
}

TEST_CASE("concurrent use fills the same nodes as serial use") {
  const PricerConfig cfg = cached(200);
  const NoteValuer serial(AutocallableSpec{}, SabrParams{}, cfg, 11);
  const NoteValuer shared(AutocallableSpec{}, SabrParams{}, cfg, 11);
  std::vector<double> spots;
  for (int i = 0; i < 16; ++i) spots.push_back(90.0 + 1.3 * i);
  std::vector<double> expect;
  for (double s : spots) expect.push_back(serial.value(s, 0.25, 3.0 / 12.0, RngStream(0, 0)).price);
  std::vector<double> got(spots.size());
  std::vector<std::thread> pool;
  for (int w = 0; w < 4; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < spots.size(); i += 4) {
        got[i] = shared.value(spots[i], 0.25, 3.0 / 12.0, RngStream(0, 0)).price;
      }
    });
  }
  for (auto& t : pool) t.join();
  CHECK(got == expect);
  CHECK(shared.cached_nodes() == serial.cached_nodes());
}
