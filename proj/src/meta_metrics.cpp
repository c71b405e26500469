#include "metaeval/meta_metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

#include "metaeval/errors.hpp"
#include "metaeval/stats.hpp"

namespace metaeval {
namespace {

MetaScore from_correlation(Statistic stat, const CorrelationResult& r) {
  MetaScore ms{stat, 0.0, {}};
  ms.detail.n = r.n;
  if (r.defined()) {
    ms.value = *r.value;
  } else {
    ms.detail.undefined = true;
  }
  return ms;
}

std::size_t ordered_pair_count(std::size_t k) { return k < 2 ? 0 : k * (k - 1); }

}  // namespace

std::string_view statistic_name(Statistic s) {
  switch (s) {
    case Statistic::kGlobalPearson:
      return "global_pearson";
    case Statistic::kSegwisePearson:
      return "segwise_pearson";
    case Statistic::kAccEq:
      return "acc_eq";
    case Statistic::kPdp:
      return "pdp";
  }
  return "unknown";
}

std::optional<Statistic> parse_statistic(std::string_view token) {
  if (token == "global" || token == "global_pearson") {
    return Statistic::kGlobalPearson;
  }
  if (token == "segwise" || token == "segwise_pearson") {
    return Statistic::kSegwisePearson;
  }
  if (token == "acceq" || token == "acc_eq") return Statistic::kAccEq;
  if (token == "pdp") return Statistic::kPdp;
  return std::nullopt;
}

MetaScore global_pearson(const PairedData& d) {
  const auto joint = joint_segments(d);
  std::vector<double> u, v;
  for (const auto& js : joint) {
    u.insert(u.end(), js.x.begin(), js.x.end());
    v.insert(v.end(), js.y.begin(), js.y.end());
  }
  if (u.size() < 2) {
    throw DegenerateStatisticError(
        "global_pearson: fewer than 2 jointly-present cells");
  }
  return from_correlation(Statistic::kGlobalPearson, pearson(u, v));
}

MetaScore segmentwise_pearson(const PairedData& d) {
  const auto joint = joint_segments(d);
  const auto m = static_cast<std::ptrdiff_t>(joint.size());

  // -2 skipped, -1 zero-variance (contributes 0), else a defined correlation
  // stored separately.
  std::vector<double> per_segment(joint.size(), 0.0);
  std::vector<std::int8_t> status(joint.size(), 0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < m; ++i) {
    const auto g = static_cast<std::size_t>(i);
    if (joint[g].x.size() < 2) {
      status[g] = -2;
      continue;
    }
    const CorrelationResult r = pearson(joint[g].x, joint[g].y);
    if (r.defined()) {
      per_segment[g] = *r.value;
    } else {
      status[g] = -1;
    }
  }

  MetaScore ms{Statistic::kSegwisePearson, 0.0, {}};
  CompensatedSum sum;
  for (std::size_t g = 0; g < joint.size(); ++g) {
    if (status[g] == -2) {
      ++ms.detail.segments_skipped;
      continue;
    }
    ++ms.detail.segments_used;
    if (status[g] == -1) {
      ++ms.detail.zero_variance_segments;
    } else {
      sum.add(per_segment[g]);
    }
  }
  if (ms.detail.segments_used == 0) {
    throw DegenerateStatisticError("segwise_pearson: zero usable segments");
  }
  ms.detail.n = ms.detail.segments_used;
  ms.value = sum.value() / static_cast<double>(ms.detail.segments_used);
  return ms;
}

PairwiseDiffSet build_pairwise_diffs(const PairedData& d) {
  const auto joint = joint_segments(d);

  std::vector<std::size_t> offset(joint.size() + 1, 0);
  for (std::size_t g = 0; g < joint.size(); ++g) {
    offset[g + 1] = offset[g] + ordered_pair_count(joint[g].x.size());
  }
  const std::size_t total = offset.back();

  PairwiseDiffSet set;
  set.systems = d.y.systems();
  set.segments = d.y.segments();
  set.segment.resize(total);
  set.sys_a.resize(total);
  set.sys_b.resize(total);
  set.dx.resize(total);
  set.dy.resize(total);

  const auto m = static_cast<std::ptrdiff_t>(joint.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t gi = 0; gi < m; ++gi) {
    const auto& js = joint[static_cast<std::size_t>(gi)];
    const std::size_t k = js.x.size();
    if (k < 2) continue;
    std::size_t at = offset[static_cast<std::size_t>(gi)];
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        if (i == j) continue;
        set.segment[at] = js.segment;
        set.sys_a[at] = js.systems[i];
        set.sys_b[at] = js.systems[j];
        set.dx[at] = js.x[i] - js.x[j];
        set.dy[at] = js.y[i] - js.y[j];
        ++at;
      }
    }
  }
  return set;
}

MetaScore pdp(const PairedData& d) {
  const PairwiseDiffSet diffs = build_pairwise_diffs(d);
  MetaScore ms{Statistic::kPdp, 0.0, {}};
  ms.detail.n = diffs.size();
  if (diffs.size() == 0) {
    ms.detail.undefined = true;
    return ms;
  }
  const CorrelationResult r = pearson(diffs.dx, diffs.dy);
  if (r.defined()) {
    ms.value = *r.value;
  } else {
    ms.detail.undefined = true;  // constant predictions; report 0
  }
  return ms;
}

MetaScore acc_eq(const PairedData& d, double epsilon) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw InputError("acc_eq: epsilon must be a nonnegative finite value");
  }
  const auto joint = joint_segments(d);
  const auto m = static_cast<std::ptrdiff_t>(joint.size());
  std::vector<std::array<std::uint64_t, 2>> tally(joint.size(), {0, 0});
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t gi = 0; gi < m; ++gi) {
    const auto& js = joint[static_cast<std::size_t>(gi)];
    const std::size_t k = js.x.size();
    std::uint64_t correct = 0, total = 0;
    for (std::size_t i = 0; i + 1 < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        const double dx = js.x[i] - js.x[j];
        const double dy = js.y[i] - js.y[j];
        ++total;
        if (js.y[i] == js.y[j]) {
          correct += (std::abs(dx) <= epsilon) ? 1 : 0;
        } else {
          correct +=
              (std::abs(dx) > epsilon && ((dx > 0.0) == (dy > 0.0))) ? 1 : 0;
        }
      }
    }
    tally[static_cast<std::size_t>(gi)] = {correct, total};
  }

  std::uint64_t correct = 0, total = 0;
  for (const auto& t : tally) {
    correct += t[0];
    total += t[1];
  }
  if (total == 0) {
    throw DegenerateStatisticError("acc_eq: no intra-segment system pairs");
  }
  MetaScore ms{Statistic::kAccEq, 0.0, {}};
  ms.value = static_cast<double>(correct) / static_cast<double>(total);
  ms.detail.n = total;
  ms.detail.correct_pairs = correct;
  ms.detail.epsilon = epsilon;
  return ms;
}

MetaScore calibrate_acc_eq(const PairedData& d) {
  const auto joint = joint_segments(d);

  // The objective is piecewise constant in epsilon with breakpoints at the
  // observed |dx| values, so sweeping those breakpoints in ascending order is
  // an exact search over the whole candidate set (midpoints never beat the
  // breakpoint below them and lose the smallest-epsilon tie-break).
  //
  // Events at |dx| > 0: a tied human pair becomes correct once
  // epsilon >= |dx| (+1); an agreeing non-tied pair stops being correct (-1).
  struct Event {
    double adx;
    std::int32_t delta;
  };
  std::vector<Event> events;
  std::uint64_t total = 0;
  std::int64_t correct0 = 0;  // correct count at epsilon = 0
  for (const auto& js : joint) {
    const std::size_t k = js.x.size();
    for (std::size_t i = 0; i + 1 < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        const double dx = js.x[i] - js.x[j];
        const double dy = js.y[i] - js.y[j];
        const double adx = std::abs(dx);
        ++total;
        if (js.y[i] == js.y[j]) {
          if (adx == 0.0) {
            ++correct0;
          } else {
            events.push_back({adx, +1});
          }
        } else if (adx > 0.0 && (dx > 0.0) == (dy > 0.0)) {
          ++correct0;
          events.push_back({adx, -1});
        }
      }
    }
  }
  if (total == 0) {
    throw DegenerateStatisticError("acc_eq: no intra-segment system pairs");
  }

  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.adx < b.adx; });

  std::int64_t best = correct0;
  double best_eps = 0.0;
  std::int64_t cur = correct0;
  std::size_t i = 0;
  while (i < events.size()) {
    const double v = events[i].adx;
    std::int64_t delta = 0;
    while (i < events.size() && events[i].adx == v) {
      delta += events[i].delta;
      ++i;
    }
    cur += delta;
    if (cur > best) {
      best = cur;
      best_eps = v;
    }
  }

  MetaScore ms{Statistic::kAccEq, 0.0, {}};
  ms.value = static_cast<double>(best) / static_cast<double>(total);
  ms.detail.n = total;
  ms.detail.correct_pairs = static_cast<std::size_t>(best);
  ms.detail.epsilon = best_eps;
  return ms;
}

MetaScore compute_statistic(const PairedData& d, Statistic s) {
  switch (s) {
    case Statistic::kGlobalPearson:
      return global_pearson(d);
    case Statistic::kSegwisePearson:
      return segmentwise_pearson(d);
    case Statistic::kAccEq:
      return calibrate_acc_eq(d);
    case Statistic::kPdp:
      return pdp(d);
  }
  throw InputError("unknown statistic");
}

}  // namespace metaeval
