#include <doctest.h>

#include <random>

#include "ldpcq/design.hpp"

using namespace ldpcq;

namespace {

DecoderDesign make_design(bool merged, int iters, int updates) {
  DecoderDesign d;
  d.code_hash = 0xdeadbeef12345678ull;
  d.z = 8;
  d.rate = {1, 2};
  d.schedule = updates > 1 ? Schedule::layered : Schedule::flooding;
  d.alignment = Alignment::row;
  d.w = 2;
  d.w_ch = 4;
  d.w_prime = 8;
  d.memory_assist = true;
  d.merged = merged;
  if (merged) {
    d.w_ups = 3;
    d.w_psi = 2;
  }
  d.design_ebn0_db = 1.25;
  d.max_iter = iters;
  d.updates_per_iter = updates;
  d.seed = 99;
  d.chq.w_ch = 4;
  d.chq.llr_scale = 17.25;
  d.chq.thresholds = {0.5, 1.25, 2.0, 3.5, 5.0, 7.25, 9.0};
  d.chq.recon = {9, 28, 47, 66, 85, 104, 118, 127};

  std::mt19937_64 rng(4);
  for (int it = 0; it < iters; ++it)
    for (int u = 0; u < updates; ++u) {
      StepTables st;
      st.iteration = it;
      st.update = u;
      for (int region : {0, 3}) {
        RegionTables rt;
        rt.q.thresholds = {static_cast<int>(5 + it + rng() % 20)};
        if (!merged) {
          rt.recon.t_levels = 2;
          rt.recon.s_levels = it == 0 ? 0 : 2;
          int cols = it == 0 ? 1 : 4;
          rt.recon.v.assign(4 * cols, 0);
          for (int ti = 0; ti < 2; ++ti)
            for (int si = 0; si < cols; ++si) {
              int val = static_cast<int>(rng() % 120) + 1;
              // fill odd-symmetrically
              rt.recon.v[static_cast<size_t>(ti + 2) * cols + si] = static_cast<int16_t>(val);
              rt.recon.v[static_cast<size_t>(1 - ti) * cols + (cols - 1 - si)] =
                  static_cast<int16_t>(-val);
            }
        } else {
          MergeTables mt;
          mt.t_levels = 2;
          mt.s_levels = it == 0 ? 0 : 2;
          mt.u_levels = it == 0 ? 2 : 4;
          int srows = it == 0 ? 1 : 4;
          mt.ups.assign(static_cast<size_t>(srows) * 4, 0);
          for (int si = 0; si < srows; ++si)
            for (int ti = 0; ti < 4; ++ti) {
              int u_lab = (ti < 2 ? -1 : 1) * (1 + static_cast<int>(rng() % mt.u_levels));
              mt.ups[static_cast<size_t>(si) * 4 + ti] = static_cast<int8_t>(u_lab);
              mt.ups[static_cast<size_t>(srows - 1 - si) * 4 + (3 - ti)] =
                  static_cast<int8_t>(-u_lab);
            }
          mt.psi.assign(2 * mt.u_levels, 0);
          mt.phi.assign(2 * mt.u_levels, 0);
          for (int ui = 0; ui < mt.u_levels; ++ui) {
            int ps = 1 + static_cast<int>(rng() % 2);
            int ph = 1 + static_cast<int>(rng() % 126);
            mt.psi[mt.u_levels + ui] = static_cast<int8_t>(ps);
            mt.psi[mt.u_levels - 1 - ui] = static_cast<int8_t>(-ps);
            mt.phi[mt.u_levels + ui] = static_cast<int16_t>(ph);
            mt.phi[mt.u_levels - 1 - ui] = static_cast<int16_t>(-ph);
          }
          rt.merge = std::move(mt);
          rt.recon.t_levels = 2;
          rt.recon.s_levels = 0;
          rt.recon.v.assign(4, 0);
        }
        st.region_ids.push_back(region);
        st.regions.push_back(std::move(rt));
      }
      d.steps.push_back(std::move(st));
    }
  return d;
}

}  // namespace

TEST_CASE("serialize/parse round trip is the identity on bytes") {
  for (bool merged : {false, true}) {
    DecoderDesign d = make_design(merged, 3, 1);
    std::string text = serialize_design(d);
    DecoderDesign back = parse_design(text);
    CHECK(serialize_design(back) == text);
    CHECK(back.code_hash == d.code_hash);
    CHECK(back.max_iter == 3);
    CHECK(back.merged == merged);
  }
}

TEST_CASE("layered designs round trip with per-layer steps") {
  DecoderDesign d = make_design(false, 2, 4);
  std::string text = serialize_design(d);
  DecoderDesign back = parse_design(text);
  CHECK(serialize_design(back) == text);
  CHECK(back.updates_per_iter == 4);
  CHECK(back.step(1, 2).update == 2);
  CHECK(back.step(1, 2).find(3) != nullptr);
  CHECK(back.step(1, 2).find(7) == nullptr);
}

TEST_CASE("table lookups respect odd symmetry") {
  DecoderDesign d = make_design(false, 2, 1);
  const RegionTables& rt = *d.step(1, 0).find(0);
  for (int t : {1, 2})
    for (int s : {-2, -1, 1, 2}) CHECK(rt.recon.value(t, s) == -rt.recon.value(-t, -s));
  const RegionTables& m = *make_design(true, 2, 1).step(1, 0).find(0);
  for (int t : {1, 2})
    for (int s : {-2, -1, 1, 2}) CHECK(m.merge->ups_of(s, t) == -m.merge->ups_of(-s, -t));
}

TEST_CASE("quantizer label mapping") {
  ThresholdQuantizer q;
  q.thresholds = {10, 40, 90};
  CHECK(q.quantize(0) == 1);
  CHECK(q.quantize(9) == 1);
  CHECK(q.quantize(10) == 2);
  CHECK(q.quantize(-10) == -2);
  CHECK(q.quantize(127) == 4);
  CHECK(q.quantize(-127) == -4);
  CHECK(q.quantize(-5) == -1);
}

TEST_CASE("validation rejects broken designs") {
  DecoderDesign d = make_design(false, 2, 1);
  SUBCASE("step count mismatch") {
    d.steps.pop_back();
    CHECK_THROWS(d.validate());
  }
  SUBCASE("asymmetric reconstruction") {
    d.steps[0].regions[0].recon.v[0] += 1;
    CHECK_THROWS(d.validate());
  }
  SUBCASE("non-monotone thresholds") {
    d.w = 3;
    CHECK_THROWS(d.validate());
  }
}

TEST_CASE("parse rejects malformed design text") {
  DecoderDesign d = make_design(false, 1, 1);
  std::string text = serialize_design(d);
  CHECK_THROWS(parse_design(text.substr(0, text.size() / 2)));
  CHECK_THROWS(parse_design("ldpcq-design 2\n"));
  CHECK_THROWS(parse_design(""));
}
