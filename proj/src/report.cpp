#include "antsel/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace antsel {

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path.string());
  return out;
}

void close_checked(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_capacity_csv(const ScenarioReport& sr, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "scenario,mode,method,snr_db,trial,receiver,capacity_bps_hz\n";
  const std::size_t trials = sr.trials;
  for (std::size_t si = 0; si < sr.snr_grid_db.size(); ++si) {
    for (std::size_t t = 0; t < trials; ++t) {
      const CapacityTrial& cell = sr.capacity_trials[si * trials + t];
      const auto write_rows = [&](const char* method, const MethodTrialResult& res) {
        for (std::size_t r = 0; r < res.capacity_per_receiver.size(); ++r)
          out << sr.scenario_name << ',' << to_string(sr.mode) << ',' << method << ','
              << format_number(sr.snr_grid_db[si]) << ',' << t << ',' << r << ','
              << format_number(res.capacity_per_receiver[r]) << '\n';
      };
      if (cell.ga) write_rows("ga", *cell.ga);
      if (cell.exhaustive) write_rows("exhaustive", *cell.exhaustive);
    }
  }
  close_checked(out, path);
}

void write_ser_csv(const ScenarioReport& sr, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "scenario,method,snr_db,symbols,errors,ser,ci_halfwidth\n";
  for (const SerCurve& curve : sr.ser_curves)
    for (const SerPoint& p : curve.points)
      out << sr.scenario_name << ',' << to_string(curve.method) << ','
          << format_number(p.snr_db) << ',' << p.symbols << ',' << p.errors << ','
          << format_number(p.ser) << ',' << format_number(p.ci_halfwidth) << '\n';
  close_checked(out, path);
}

}  // namespace

void emit_csv(const RunReport& report, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  for (const ScenarioReport& sr : report.scenarios) {
    const char* suffix = sr.kind == ExperimentKind::kCapacity ? "_capacity.csv" : "_ser.csv";
    const auto path = out_dir / (sr.scenario_name + suffix);
    if (sr.kind == ExperimentKind::kCapacity)
      write_capacity_csv(sr, path);
    else
      write_ser_csv(sr, path);
  }
}

void write_manifest(const RunReport& report, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  nlohmann::json manifest;
  manifest["tool_version"] = report.tool_version;
  manifest["config_hash"] = report.config_hash;
  manifest["jobs"] = report.jobs;
  manifest["wall_clock_s"] = report.wall_clock_s;

  nlohmann::json scenarios = nlohmann::json::array();
  for (const ScenarioReport& sr : report.scenarios) {
    nlohmann::json entry;
    entry["name"] = sr.scenario_name;
    entry["kind"] = to_string(sr.kind);
    entry["mode"] = to_string(sr.mode);
    entry["trials"] = sr.trials;
    entry["snr_points"] = sr.snr_grid_db.size();
    entry["receivers"] = sr.num_receivers;
    entry["evaluations"] = sr.evaluations;
    entry["wall_clock_s"] = sr.wall_clock_s;

    if (sr.kind == ExperimentKind::kCapacity && !sr.capacity_trials.empty()) {
      // Per-SNR aggregate of mean capacity and min-rate per method, plus the
      // GA-vs-exhaustive gap when both ran.
      nlohmann::json per_snr = nlohmann::json::array();
      double ratio_sum = 0.0;
      double ratio_min = 2.0;
      std::size_t ratio_count = 0;
      for (std::size_t si = 0; si < sr.snr_grid_db.size(); ++si) {
        double ga_mean = 0.0, ga_min = 0.0, ex_mean = 0.0, ex_min = 0.0;
        std::size_t ga_n = 0, ex_n = 0;
        for (std::size_t t = 0; t < sr.trials; ++t) {
          const CapacityTrial& cell = sr.capacity_trials[si * sr.trials + t];
          if (cell.ga) {
            ga_mean += cell.ga->mean_rate;
            ga_min += cell.ga->min_rate;
            ++ga_n;
          }
          if (cell.exhaustive) {
            ex_mean += cell.exhaustive->mean_rate;
            ex_min += cell.exhaustive->min_rate;
            ++ex_n;
          }
          if (cell.ga && cell.exhaustive) {
            for (std::size_t r = 0; r < cell.ga->capacity_per_receiver.size(); ++r) {
              const double ex_cap = cell.exhaustive->capacity_per_receiver[r];
              if (ex_cap > 0.0) {
                const double ratio = cell.ga->capacity_per_receiver[r] / ex_cap;
                ratio_sum += ratio;
                ratio_min = std::min(ratio_min, ratio);
                ++ratio_count;
              }
            }
          }
        }
        nlohmann::json point;
        point["snr_db"] = sr.snr_grid_db[si];
        if (ga_n) {
          point["ga_mean_capacity"] = ga_mean / static_cast<double>(ga_n);
          point["ga_mean_min_rate"] = ga_min / static_cast<double>(ga_n);
        }
        if (ex_n) {
          point["exhaustive_mean_capacity"] = ex_mean / static_cast<double>(ex_n);
          point["exhaustive_mean_min_rate"] = ex_min / static_cast<double>(ex_n);
        }
        per_snr.push_back(point);
      }
      entry["capacity_summary"] = per_snr;
      if (ratio_count) {
        entry["ga_exhaustive_gap"] = {
            {"mean_capacity_ratio", ratio_sum / static_cast<double>(ratio_count)},
            {"min_capacity_ratio", ratio_min},
            {"pairs", ratio_count}};
      }
    }

    if (sr.kind == ExperimentKind::kSer) {
      nlohmann::json curves = nlohmann::json::array();
      for (const SerCurve& curve : sr.ser_curves) {
        nlohmann::json c;
        c["method"] = to_string(curve.method);
        c["note"] = curve.config_note;
        nlohmann::json pts = nlohmann::json::array();
        for (const SerPoint& p : curve.points)
          pts.push_back({{"snr_db", p.snr_db}, {"ser", p.ser}});
        c["points"] = pts;
        curves.push_back(c);
      }
      entry["ser_summary"] = curves;
    }

    scenarios.push_back(entry);
  }
  manifest["scenarios"] = scenarios;

  const auto path = out_dir / "manifest.json";
  auto out = open_out(path);
  out << manifest.dump(2) << '\n';
  close_checked(out, path);
}

}  // namespace antsel
