#include "pcq/simulator.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <limits>
#include <random>

namespace pcq {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

enum class Event { Arrival, Departure, Control };

/// Competing exponential clocks, resampled after every event
/// (memorylessness makes this exact); one stream per clock.
class Engine {
public:
  Engine(const SimConfig& cfg) : cfg_(cfg) {
    std::uint64_t s = cfg.seed;
    arr_.seed(splitmix64(s));
    dep_.seed(splitmix64(s));
    ctl_.seed(splitmix64(s));
    q_ = 0;
    spd_ = 0;
  }

  std::uint64_t q() const { return q_; }
  std::uint64_t speed() const { return spd_; }

  double departure_rate() const {
    if (q_ == 0) return 0.0;
    const ModelParams& p = cfg_.params;
    switch (p.variant) {
      case Variant::ControllerInfinite:
        return static_cast<double>(spd_) * p.mu;
      case Variant::ControllerFinite:
        return cfg_.profile ? (*cfg_.profile)[spd_]
                            : static_cast<double>(spd_) * p.mu;
      case Variant::ObserverMM1:
        return p.mu;
      case Variant::ObserverMMInf:
        return static_cast<double>(q_) * p.mu;
    }
    return 0.0;
  }

  /// Advances one event; returns the elapsed time and the event type.
  std::pair<double, Event> step() {
    const ModelParams& p = cfg_.params;
    std::exponential_distribution<double> ea(p.lambda), ec(p.nu);
    double dt = ea(arr_);
    Event ev = Event::Arrival;
    const double dr = departure_rate();
    if (dr > 0.0) {
      std::exponential_distribution<double> ed(dr);
      const double td = ed(dep_);
      if (td < dt) {
        dt = td;
        ev = Event::Departure;
      }
    }
    const double tc = ec(ctl_);
    if (tc < dt) {
      dt = tc;
      ev = Event::Control;
    }
    switch (ev) {
      case Event::Arrival:
        ++q_;
        break;
      case Event::Departure:
        --q_;
        break;
      case Event::Control:
        if (p.variant == Variant::ControllerFinite)
          spd_ = std::min<std::uint64_t>(q_, *p.smax);
        else
          spd_ = q_;
        break;
    }
    return {dt, ev};
  }

private:
  const SimConfig& cfg_;
  std::mt19937_64 arr_, dep_, ctl_;
  std::uint64_t q_, spd_;
};

double t_quantile_975(int df) {
  boost::math::students_t dist(df);
  return boost::math::quantile(dist, 0.975);
}

SimEstimate batch_means(const std::string& name,
                        const std::vector<double>& batch_values) {
  SimEstimate e;
  e.name = name;
  const int b = static_cast<int>(batch_values.size());
  e.batches = b;
  if (b == 0) return e;
  double mean = 0.0;
  for (double v : batch_values) mean += v;
  mean /= b;
  e.point = mean;
  if (b < 2) return e;
  double ss = 0.0;
  for (double v : batch_values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (b - 1));
  e.half_width = t_quantile_975(b - 1) * sd / std::sqrt(static_cast<double>(b));
  return e;
}

double effective_warmup(const SimConfig& cfg) {
  return cfg.warmup < 0.0 ? 0.1 * cfg.horizon : cfg.warmup;
}

} // namespace

const SimEstimate& SimResult::estimate(const std::string& name) const {
  for (const auto& e : estimates)
    if (e.name == name) return e;
  throw DomainError("SimResult: unknown estimate " + name);
}

SimResult simulate(const SimConfig& cfg) {
  validate_params(cfg.params, true);
  if (cfg.batches < 10) throw DomainError("simulate: batches must be >= 10");
  const double warmup = effective_warmup(cfg);
  if (!(cfg.horizon > warmup))
    throw DomainError("simulate: horizon must exceed warmup");
  const int nb = cfg.batches;
  const double batch_len = (cfg.horizon - warmup) / nb;

  Engine eng(cfg);
  std::vector<double> bt_q(nb, 0.0), bt_s(nb, 0.0), bt_p0(nb, 0.0);
  SimResult out{{}, JointDist(cfg.table_qmax, cfg.table_jmax), {}, {}, {}, 0};
  std::vector<double> table((cfg.table_qmax + 1) * (cfg.table_jmax + 1), 0.0);
  std::vector<double> ctl_hist;
  std::vector<std::uint64_t> up, down;
  double t = 0.0;
  while (t < cfg.horizon) {
    const std::uint64_t q = eng.q(), s = eng.speed();
    auto [dt, ev] = eng.step();
    ++out.events;
    // attribute the sojourn [t, t+dt) piecewise to warmup / batches
    double seg_start = t;
    const double seg_stop = std::min(t + dt, cfg.horizon);
    while (seg_start < seg_stop) {
      if (seg_start < warmup) {
        seg_start = std::min(seg_stop, warmup);
        continue;
      }
      const int b = std::min<int>(
          nb - 1, static_cast<int>((seg_start - warmup) / batch_len));
      const double bend = warmup + (b + 1) * batch_len;
      const double piece = std::min(seg_stop, bend) - seg_start;
      bt_q[b] += piece * static_cast<double>(q);
      bt_s[b] += piece * static_cast<double>(s);
      if (q == 0) bt_p0[b] += piece;
      seg_start += piece;
    }
    if (t >= warmup) {
      const std::size_t qi = std::min<std::uint64_t>(q, cfg.table_qmax);
      const std::size_t ji = std::min<std::uint64_t>(s, cfg.table_jmax);
      table[qi * (cfg.table_jmax + 1) + ji] += std::min(dt, cfg.horizon - t);
      switch (ev) {
        case Event::Arrival:
          if (up.size() <= q) up.resize(q + 1, 0);
          ++up[q];
          break;
        case Event::Departure:
          if (down.size() <= q - 1) down.resize(q, 0);
          ++down[q - 1];
          break;
        case Event::Control: {
          if (ctl_hist.size() <= q) ctl_hist.resize(q + 1, 0.0);
          ctl_hist[q] += 1.0;
          break;
        }
      }
    }
    t += dt;
  }

  const double span = cfg.horizon - warmup;
  std::vector<double> vq(nb), vs(nb), vp0(nb);
  for (int b = 0; b < nb; ++b) {
    vq[b] = bt_q[b] / batch_len;
    vs[b] = bt_s[b] / batch_len;
    vp0[b] = bt_p0[b] / batch_len;
  }
  out.estimates.push_back(batch_means("EQ", vq));
  out.estimates.push_back(batch_means("ES", vs));
  out.estimates.push_back(batch_means("P0", vp0));
  for (std::size_t i = 0; i <= cfg.table_qmax; ++i)
    for (std::size_t j = 0; j <= cfg.table_jmax; ++j)
      out.empirical.set(i, j, table[i * (cfg.table_jmax + 1) + j] / span);
  out.upcross_rate.resize(up.size());
  for (std::size_t i = 0; i < up.size(); ++i)
    out.upcross_rate[i] = static_cast<double>(up[i]) / span;
  out.downcross_rate.resize(down.size());
  for (std::size_t i = 0; i < down.size(); ++i)
    out.downcross_rate[i] = static_cast<double>(down[i]) / span;
  double nctl = 0.0;
  for (double c : ctl_hist) nctl += c;
  out.control_q_hist = ctl_hist;
  if (nctl > 0.0)
    for (double& c : out.control_q_hist) c /= nctl;
  return out;
}

ConjectureProbe conjecture_probe(
    const SimConfig& cfg, const std::vector<std::pair<double, double>>& grid) {
  if (!cfg.scaled)
    throw DomainError("conjecture_probe: scaled flag must be set");
  if (cfg.params.variant != Variant::ControllerInfinite)
    throw DomainError("conjecture_probe: infinite controller only");
  validate_params(cfg.params);
  const double nu = cfg.params.nu;
  const double threshold = std::ceil(1.0 / std::sqrt(nu));
  const double warmup = effective_warmup(cfg);
  const int nb = cfg.batches;
  const double batch_len = (cfg.horizon - warmup) / nb;

  Engine eng(cfg);
  // per batch: time near each axis, integral of the fluid coordinate there,
  // and integral of x^{nu Q} y^{nu S} per grid point
  std::vector<double> tq(nb, 0.0), ts(nb, 0.0), iq(nb, 0.0), is(nb, 0.0);
  std::vector<std::vector<double>> pgf(grid.size(),
                                       std::vector<double>(nb, 0.0));
  double t = 0.0;
  while (t < cfg.horizon) {
    const double q = static_cast<double>(eng.q());
    const double s = static_cast<double>(eng.speed());
    auto [dt, ev] = eng.step();
    (void)ev;
    double seg_start = t;
    const double seg_stop = std::min(t + dt, cfg.horizon);
    while (seg_start < seg_stop) {
      if (seg_start < warmup) {
        seg_start = std::min(seg_stop, warmup);
        continue;
      }
      const int b = std::min<int>(
          nb - 1, static_cast<int>((seg_start - warmup) / batch_len));
      const double bend = warmup + (b + 1) * batch_len;
      const double piece = std::min(seg_stop, bend) - seg_start;
      if (q <= threshold && s > threshold) {
        tq[b] += piece;
        is[b] += piece * nu * s;
      } else if (s <= threshold && q > threshold) {
        ts[b] += piece;
        iq[b] += piece * nu * q;
      }
      for (std::size_t g = 0; g < grid.size(); ++g)
        pgf[g][b] += piece * std::pow(grid[g].first, nu * q) *
                     std::pow(grid[g].second, nu * s);
      seg_start += piece;
    }
    t += dt;
  }

  ConjectureProbe out;
  std::vector<double> fq(nb), fs(nb), mq, ms;
  for (int b = 0; b < nb; ++b) {
    fq[b] = tq[b] / batch_len;
    fs[b] = ts[b] / batch_len;
    if (ts[b] > 0.0) mq.push_back(iq[b] / ts[b]);
    if (tq[b] > 0.0) ms.push_back(is[b] / tq[b]);
  }
  out.frac_q_axis = batch_means("frac_q_axis", fq);
  out.frac_s_axis = batch_means("frac_s_axis", fs);
  out.mean_scaled_q = batch_means("mean_scaled_q", mq);
  out.mean_scaled_s = batch_means("mean_scaled_s", ms);
  for (std::size_t g = 0; g < grid.size(); ++g) {
    std::vector<double> v(nb);
    for (int b = 0; b < nb; ++b) v[b] = pgf[g][b] / batch_len;
    out.pgf_samples.push_back({grid[g], batch_means("pgf", v)});
  }
  return out;
}

FluidProbe fluid_probe(const SimConfig& cfg) {
  if (cfg.params.variant != Variant::ControllerFinite)
    throw DomainError("fluid_probe: finite controller only");
  validate_params(cfg.params);
  const unsigned smax = *cfg.params.smax;
  const double nu = cfg.params.nu;
  const double lam = cfg.params.lambda, mu = cfg.params.mu;
  const double threshold = std::ceil(1.0 / std::sqrt(nu));
  const double warmup = effective_warmup(cfg);

  FluidProbe out;
  out.threshold = threshold;
  out.occupancy.assign(smax + 2, 0.0);
  out.drain_time_mean.assign(smax + 1, 0.0);
  out.drain_count.assign(smax + 1, 0);
  std::vector<double> drain_sum(smax + 1, 0.0);

  Engine eng(cfg);
  double t = 0.0, span = 0.0;
  bool draining = false;
  unsigned drain_prior = 0;
  double drain_start = 0.0;
  while (t < cfg.horizon) {
    const std::uint64_t q0 = eng.q();
    const std::uint64_t s0 = eng.speed();
    auto [dt, ev] = eng.step();
    const double piece =
        std::min(t + dt, cfg.horizon) - std::min(std::max(t, warmup), cfg.horizon);
    if (piece > 0.0) {
      span += piece;
      const bool fluid = static_cast<double>(q0) > threshold;
      if (static_cast<double>(s0) * mu < lam) {
        out.frac_fluid_unstable += piece;
        out.occupancy[s0] += piece;
      } else if (s0 == smax && fluid) {
        out.frac_fluid_stable += piece;
        out.occupancy[smax + 1] += piece;
      } else {
        out.frac_normal += piece;
        out.occupancy[s0] += piece;
      }
    }
    const double tnew = t + dt;
    if (ev == Event::Control && !draining &&
        static_cast<double>(s0) * mu < lam &&
        static_cast<double>(eng.speed()) * mu > lam &&
        static_cast<double>(eng.q()) > threshold) {
      draining = true;
      drain_prior = static_cast<unsigned>(s0);
      drain_start = tnew;
    }
    if (draining && static_cast<double>(eng.q()) <= threshold) {
      if (tnew >= warmup) {
        drain_sum[drain_prior] += (tnew - drain_start) * nu;
        ++out.drain_count[drain_prior];
      }
      draining = false;
    }
    t = tnew;
  }
  out.frac_fluid_unstable /= span;
  out.frac_fluid_stable /= span;
  out.frac_normal /= span;
  for (double& o : out.occupancy) o /= span;
  for (unsigned j = 0; j <= smax; ++j)
    if (out.drain_count[j] > 0)
      out.drain_time_mean[j] = drain_sum[j] / out.drain_count[j];
  return out;
}

} // namespace pcq
