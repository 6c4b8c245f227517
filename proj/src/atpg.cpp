// SPDX-License-Identifier: Apache-2.0
#include "socbist/atpg.hpp"

#include <algorithm>
#include <bit>
#include <random>

#include "sim_kernel.hpp"

namespace socbist {

using detail::Word;

namespace {

// Lane k of the batch starting at `base` holds vector base + k; bit i of
// that integer drives input i.
void exhaustive_inputs(std::uint64_t base, std::size_t width, std::vector<Word>& words) {
  static constexpr Word kLow[6] = {0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull,
                                   0xF0F0F0F0F0F0F0F0ull, 0xFF00FF00FF00FF00ull,
                                   0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull};
  words.resize(width);
  for (std::size_t i = 0; i < width; ++i)
    words[i] = i < 6 ? kLow[i] : (((base >> i) & 1) ? ~Word{0} : Word{0});
}

Pattern vector_bits(std::uint64_t v, std::size_t width) {
  Pattern p(width);
  for (std::size_t i = 0; i < width; ++i) p[i] = (v >> i) & 1;
  return p;
}

void pack_single(const Pattern& p, std::vector<Word>& words) {
  words.resize(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) words[i] = p[i] ? ~Word{0} : Word{0};
}

class Generator {
 public:
  Generator(const Netlist& nl, std::span<const Fault> targets, const AtpgOptions& opt)
      : nl_(nl), sim_(nl), targets_(targets), opt_(opt), rng_(opt.seed),
        covered_(targets.size(), 0), good_(std::max<std::size_t>(nl.num_nets(), 1)),
        faulty_(good_.size()) {}

  AtpgResult run() {
    const std::size_t width = nl_.num_inputs();
    if (width <= opt_.exhaustive_limit) {
      for (std::size_t t = 0; t < targets_.size(); ++t)
        if (!covered_[t]) search_exhaustive(t);
    } else {
      random_phase();
      for (std::size_t t = 0; t < targets_.size(); ++t)
        if (!covered_[t]) hill_climb(t);
    }
    AtpgResult result;
    result.patterns = compact();
    for (std::size_t t = 0; t < targets_.size(); ++t)
      if (!covered_[t]) result.undetected.push_back(targets_[t]);
    return result;
  }

 private:
  void accept(const Pattern& p) {
    pack_single(p, inputs_);
    sim_.eval_good(inputs_, good_.data());
    for (std::size_t t = 0; t < targets_.size(); ++t)
      if (!covered_[t] && sim_.detect(targets_[t], good_.data(), faulty_.data(), 1)) covered_[t] = 1;
    patterns_.push_back(p);
  }

  void search_exhaustive(std::size_t t) {
    const std::size_t width = nl_.num_inputs();
    const std::uint64_t space = std::uint64_t{1} << width;
    for (std::uint64_t base = 0; base < space; base += 64) {
      exhaustive_inputs(base, width, inputs_);
      sim_.eval_good(inputs_, good_.data());
      const Word mask = detail::lane_mask(static_cast<std::size_t>(std::min<std::uint64_t>(64, space - base)));
      const Word hit = sim_.detect(targets_[t], good_.data(), faulty_.data(), mask);
      if (hit) {
        accept(vector_bits(base + static_cast<std::uint64_t>(std::countr_zero(hit)), width));
        return;
      }
    }
  }

  Pattern random_pattern() {
    Pattern p(nl_.num_inputs());
    for (auto& bit : p) bit = static_cast<std::uint8_t>(rng_() & 1);
    return p;
  }

  void random_phase() {
    std::vector<Pattern> pool;
    pool.reserve(opt_.random_patterns);
    for (std::size_t i = 0; i < opt_.random_patterns; ++i) pool.push_back(random_pattern());
    const auto first = first_detection(nl_, pool, targets_);
    std::vector<std::size_t> useful;
    for (std::size_t i = 0; i < first.size(); ++i)
      if (first[i] != kNotDetected) useful.push_back(first[i]);
    std::sort(useful.begin(), useful.end());
    useful.erase(std::unique(useful.begin(), useful.end()), useful.end());
    for (std::size_t idx : useful) accept(pool[idx]);
  }

  // Scores 64 candidate vectors at once: activated lanes rank above
  // non-activated ones, then by the number of nets carrying the fault effect.
  void hill_climb(std::size_t t) {
    const Fault& f = targets_[t];
    const std::size_t width = nl_.num_inputs();
    const Word stuck = f.stuck_at ? ~Word{0} : Word{0};
    std::size_t trials = 0;
    Pattern current = random_pattern();
    long current_score = -1;
    std::vector<std::size_t> flips(64);
    std::vector<long> score(64);
    while (trials < opt_.trial_budget) {
      // Lane 0 re-evaluates the current vector; lanes 1..63 flip one bit each.
      const std::size_t lanes = std::min<std::size_t>({64, width + 1, opt_.trial_budget - trials + 1});
      inputs_.assign(width, 0);
      for (std::size_t i = 0; i < width; ++i)
        if (current[i]) inputs_[i] = ~Word{0};
      for (std::size_t k = 1; k < lanes; ++k) {
        flips[k] = width <= 63 ? k - 1 : static_cast<std::size_t>(rng_() % width);
        inputs_[flips[k]] ^= Word{1} << k;
      }
      trials += lanes - 1 + (current_score < 0 ? 1 : 0);
      const Word mask = detail::lane_mask(lanes);
      sim_.eval_good(inputs_, good_.data());
      const Word hit = sim_.detect(f, good_.data(), faulty_.data(), mask);
      if (hit) {
        Pattern p = current;
        const auto lane = static_cast<std::size_t>(std::countr_zero(hit));
        if (lane != 0) p[flips[lane]] ^= 1;
        accept(p);
        return;
      }
      const Word active = (good_[f.net] ^ stuck) & mask;
      std::fill(score.begin(), score.end(), 0);
      if (active) {
        sim_.propagate(f, good_.data(), faulty_.data());
        for (std::size_t n = 0; n < nl_.num_nets(); ++n) {
          Word d = (good_[n] ^ faulty_[n]) & mask;
          while (d) {
            score[static_cast<std::size_t>(std::countr_zero(d))] += 1;
            d &= d - 1;
          }
        }
      }
      for (std::size_t k = 0; k < lanes; ++k)
        if ((active >> k) & 1) score[k] += 1L << 20;
      current_score = score[0];
      std::size_t best = 0;
      for (std::size_t k = 1; k < lanes; ++k)
        if (score[k] > score[best]) best = k;
      if (best != 0) {
        current[flips[best]] ^= 1;
      } else {
        current = random_pattern();
        current_score = -1;
      }
    }
  }

  // Reverse-order compaction: walk patterns last to first and keep those
  // that detect a target not already detected by a kept pattern.
  std::vector<Pattern> compact() {
    std::vector<char> seen(targets_.size(), 0);
    std::vector<char> keep(patterns_.size(), 0);
    for (std::size_t i = patterns_.size(); i-- > 0;) {
      pack_single(patterns_[i], inputs_);
      sim_.eval_good(inputs_, good_.data());
      for (std::size_t t = 0; t < targets_.size(); ++t) {
        if (!seen[t] && covered_[t] && sim_.detect(targets_[t], good_.data(), faulty_.data(), 1)) {
          seen[t] = 1;
          keep[i] = 1;
        }
      }
    }
    std::vector<Pattern> out;
    for (std::size_t i = 0; i < patterns_.size(); ++i)
      if (keep[i]) out.push_back(std::move(patterns_[i]));
    return out;
  }

  const Netlist& nl_;
  detail::WordSimulator sim_;
  std::span<const Fault> targets_;
  AtpgOptions opt_;
  std::mt19937_64 rng_;
  std::vector<char> covered_;
  std::vector<Word> good_;
  std::vector<Word> faulty_;
  std::vector<Word> inputs_;
  std::vector<Pattern> patterns_;
};

}  // namespace

AtpgResult atpg(const Netlist& nl, std::span<const Fault> targets, const AtpgOptions& options) {
  if (targets.empty()) return {};
  return Generator(nl, targets, options).run();
}

}  // namespace socbist
