#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "antbp/harness.hpp"
#include "antbp/svgplot.hpp"

namespace fs = std::filesystem;

namespace antbp {

namespace {

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  f.write(content.data(), std::streamsize(content.size()));
  if (!f) throw std::runtime_error("short write to " + p.string());
}

std::optional<std::string> read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) return std::nullopt;
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string num6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string num9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string no_commas(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

// bin packets by injection slot (width 50) and average their latency under
// the run's latency semantics
std::string latency_bins_csv(const ScenarioConfig& cfg, const RunResult& res,
                             std::vector<std::string>* tick_labels,
                             std::vector<double>* means) {
  const int T = cfg.traffic.horizon;
  const int width = 50;
  const int nbins = (T + width - 1) / width;
  std::vector<long> count(nbins, 0);
  std::vector<double> sum(nbins, 0.0);
  for (const Packet& p : res.packets) {
    double lat;
    if (p.delivered_at >= 0)
      lat = double(p.delivered_at - p.injected_at);
    else if (cfg.latency_mode == LatencyMode::Cap)
      lat = double(T);
    else
      lat = double(T - p.injected_at);
    int b = p.injected_at / width;
    ++count[b];
    sum[b] += lat;
  }
  std::string csv = "bin_start,count,mean_latency\n";
  for (int b = 0; b < nbins; ++b) {
    double mean = count[b] ? sum[b] / double(count[b]) : 0.0;
    csv += std::to_string(b * width) + "," + std::to_string(count[b]) + "," +
           num6(mean) + "\n";
    if (tick_labels) tick_labels->push_back(std::to_string(b * width));
    if (means) means->push_back(mean);
  }
  return csv;
}

std::string metrics_csv(const ScenarioConfig& cfg, const RunResult& res,
                        int topology_index, int flow_index) {
  const RunMetrics& m = res.metrics;
  std::string csv =
      "scheme,topology_index,flow_index,injected,delivered,delivery,goodput,"
      "latency_mean,latency_streaming,latency_bursty,delivery_streaming,"
      "delivery_bursty,stable,backlog_q2,backlog_q4,flowcons_checked,"
      "flowcons_max_residual,flowcons_skip_reason,virtual_exchanges,virtual_ants,"
      "proactive_ants,final_links\n";
  char resid[48];
  std::snprintf(resid, sizeof resid, "%.6e", m.flowcons_max_residual);
  csv += std::string(scheme_name(cfg.scheme)) + "," + std::to_string(topology_index) +
         "," + std::to_string(flow_index) + "," + std::to_string(m.injected) + "," +
         std::to_string(m.delivered) + "," + num6(m.delivery) + "," + num6(m.goodput) +
         "," + num6(m.latency_mean) + "," + num6(m.latency_streaming) + "," +
         num6(m.latency_bursty) + "," + num6(m.delivery_streaming) + "," +
         num6(m.delivery_bursty) + "," + (m.stable ? "1" : "0") + "," +
         num6(m.backlog_q2) + "," + num6(m.backlog_q4) + "," +
         (m.flowcons_checked ? "1" : "0") + "," + resid + "," +
         no_commas(m.flowcons_skip_reason) + "," + std::to_string(m.virtual_exchanges) +
         "," + std::to_string(m.virtual_ants) + "," + std::to_string(m.proactive_ants) +
         "," + std::to_string(res.final_link_count) + "\n";
  return csv;
}

std::vector<std::string> run_file_list(bool has_rho) {
  std::vector<std::string> files = {"manifest.ini",     "topology.txt", "slots.csv",
                                    "packets.csv",      "events.csv",   "metrics.csv",
                                    "latency_bins.csv", "latency_bins.svg"};
  if (has_rho) files.push_back("pheromone.csv");
  return files;
}

struct Agg {
  int n = 0;
  double mean = 0.0, ci = 0.0;
};

Agg aggregate(const std::vector<double>& xs) {
  Agg a;
  a.n = int(xs.size());
  if (xs.empty()) return a;
  double s = 0.0;
  for (double x : xs) s += x;
  a.mean = s / double(a.n);
  if (a.n >= 2) {
    double v = 0.0;
    for (double x : xs) v += (x - a.mean) * (x - a.mean);
    v /= double(a.n - 1);
    a.ci = 1.96 * std::sqrt(v / double(a.n));
  }
  return a;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void emit_outputs(const std::string& dir, const ScenarioConfig& cfg,
                  const RunResult& res, int topology_index, int flow_index) {
  fs::create_directories(dir);
  const fs::path root(dir);

  std::string manifest = std::string("# ") + kVersion + "\n" + config_to_text(cfg) +
                         "\n[instance]\ntopology_index = " +
                         std::to_string(topology_index) +
                         "\nflow_index = " + std::to_string(flow_index) + "\n";
  write_file(root / "manifest.ini", manifest);

  save_topology((root / "topology.txt").string(), res.initial_graph, res.initial_rates);

  std::string slots = "t,deliveries,backlog,g,scheduled\n";
  for (const SlotRow& r : res.slots)
    slots += std::to_string(r.t) + "," + std::to_string(r.deliveries) + "," +
             std::to_string(r.backlog) + "," + num6(r.g) + "," +
             std::to_string(r.scheduled) + "\n";
  write_file(root / "slots.csv", slots);

  std::string packets = "id,src,dst,injected_at,delivered_at,hops\n";
  for (const Packet& p : res.packets)
    packets += std::to_string(p.id) + "," + std::to_string(p.src) + "," +
               std::to_string(p.commodity) + "," + std::to_string(p.injected_at) + "," +
               std::to_string(p.delivered_at) + "," + std::to_string(p.hops) + "\n";
  write_file(root / "packets.csv", packets);

  std::string events = "t,kind,subject,detail\n";
  for (const EventRow& e : res.events)
    events += std::to_string(e.t) + "," + no_commas(e.kind) + "," +
              no_commas(e.subject) + "," + no_commas(e.detail) + "\n";
  write_file(root / "events.csv", events);

  write_file(root / "metrics.csv", metrics_csv(cfg, res, topology_index, flow_index));

  std::vector<std::string> ticks;
  PlotSeries bins;
  bins.label = "mean latency";
  write_file(root / "latency_bins.csv", latency_bins_csv(cfg, res, &ticks, &bins.y));
  write_file(root / "latency_bins.svg",
             line_chart_svg("Latency by arrival slot", "arrival-slot bin",
                            ticks, "slots", {bins}));

  if (res.has_rho) {
    std::string ph = "src,dst,commodity,rho\n";
    const NetworkGraph& g = res.final_graph;
    for (int e = 0; e < g.link_count(); ++e) {
      if (!g.alive[e]) continue;
      for (int c = 0; c < res.rho.n_nodes; ++c)
        ph += std::to_string(g.links[e].src) + "," + std::to_string(g.links[e].dst) +
              "," + std::to_string(c) + "," + num9(res.rho.at(e, c)) + "\n";
    }
    write_file(root / "pheromone.csv", ph);
  }
}

void emit_sweep_outputs(const std::string& dir, const ScenarioConfig& base,
                        const SweepTable& table) {
  fs::create_directories(dir);
  const fs::path root(dir);

  std::string manifest = std::string("# ") + kVersion + "\n" + config_to_text(base) +
                         "\n[sweep]\naxis = " + table.axis + "\nvalues = ";
  for (size_t k = 0; k < table.values.size(); ++k)
    manifest += (k ? "," : "") + table.values[k];
  manifest += "\nseeds = " + std::to_string(table.seeds) + "\n";
  write_file(root / "sweep_manifest.ini", manifest);

  std::string cells =
      "axis,value,seed_index,topology_index,flow_index,ok,error,injected,delivered,"
      "delivery,goodput,latency_mean,latency_streaming,latency_bursty,"
      "delivery_streaming,delivery_bursty,stable\n";
  for (const SweepCell& c : table.cells) {
    const RunMetrics& m = c.metrics;
    cells += table.axis + "," + c.value + "," + std::to_string(c.seed_index) + "," +
             std::to_string(c.topology_index) + "," + std::to_string(c.flow_index) +
             "," + (c.ok ? "1" : "0") + "," + no_commas(c.error) + "," +
             std::to_string(m.injected) + "," + std::to_string(m.delivered) + "," +
             num6(m.delivery) + "," + num6(m.goodput) + "," + num6(m.latency_mean) +
             "," + num6(m.latency_streaming) + "," + num6(m.latency_bursty) + "," +
             num6(m.delivery_streaming) + "," + num6(m.delivery_bursty) + "," +
             (m.stable ? "1" : "0") + "\n";
  }
  write_file(root / "sweep_cells.csv", cells);

  std::string summary =
      "axis,value,n,latency,latency_ci,latency_streaming,latency_streaming_ci,"
      "latency_bursty,latency_bursty_ci,delivery,delivery_ci,delivery_streaming,"
      "delivery_streaming_ci,delivery_bursty,delivery_bursty_ci,goodput,goodput_ci,"
      "stable_fraction\n";
  for (size_t vi = 0; vi < table.values.size(); ++vi) {
    std::vector<double> lat, lat_s, lat_b, del, del_s, del_b, gp;
    int n_ok = 0, n_stable = 0;
    for (const SweepCell& c : table.cells) {
      if (size_t(c.seed_index) >= size_t(table.seeds)) continue;
      if (c.value != table.values[vi]) continue;
      if (!c.ok) continue;
      ++n_ok;
      lat.push_back(c.metrics.latency_mean);
      del.push_back(c.metrics.delivery);
      gp.push_back(c.metrics.goodput);
      if (c.metrics.has_streaming) {
        lat_s.push_back(c.metrics.latency_streaming);
        del_s.push_back(c.metrics.delivery_streaming);
      }
      if (c.metrics.has_bursty) {
        lat_b.push_back(c.metrics.latency_bursty);
        del_b.push_back(c.metrics.delivery_bursty);
      }
      if (c.metrics.stable) ++n_stable;
    }
    Agg a_lat = aggregate(lat), a_ls = aggregate(lat_s), a_lb = aggregate(lat_b);
    Agg a_del = aggregate(del), a_ds = aggregate(del_s), a_db = aggregate(del_b);
    Agg a_gp = aggregate(gp);
    summary += table.axis + "," + table.values[vi] + "," + std::to_string(n_ok) + "," +
               num6(a_lat.mean) + "," + num6(a_lat.ci) + "," + num6(a_ls.mean) + "," +
               num6(a_ls.ci) + "," + num6(a_lb.mean) + "," + num6(a_lb.ci) + "," +
               num6(a_del.mean) + "," + num6(a_del.ci) + "," + num6(a_ds.mean) + "," +
               num6(a_ds.ci) + "," + num6(a_db.mean) + "," + num6(a_db.ci) + "," +
               num6(a_gp.mean) + "," + num6(a_gp.ci) + "," +
               num6(n_ok ? double(n_stable) / n_ok : 0.0) + "\n";
  }
  write_file(root / "sweep_summary.csv", summary);

  plot_from_summary((root / "sweep_summary.csv").string(), dir);
}

void plot_from_summary(const std::string& summary_csv, const std::string& out_dir) {
  auto content = read_file(summary_csv);
  if (!content) throw std::runtime_error("cannot read " + summary_csv);
  std::istringstream in(*content);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty summary " + summary_csv);
  std::vector<std::string> header = split_csv_line(line);
  auto col = [&](const std::string& name) {
    for (size_t k = 0; k < header.size(); ++k)
      if (header[k] == name) return int(k);
    throw std::runtime_error("summary is missing column " + name);
  };
  int c_value = col("value"), c_lat = col("latency"), c_lat_ci = col("latency_ci");
  int c_ls = col("latency_streaming"), c_ls_ci = col("latency_streaming_ci");
  int c_lb = col("latency_bursty"), c_lb_ci = col("latency_bursty_ci");
  int c_del = col("delivery"), c_del_ci = col("delivery_ci");
  int c_ds = col("delivery_streaming"), c_ds_ci = col("delivery_streaming_ci");
  int c_db = col("delivery_bursty"), c_db_ci = col("delivery_bursty_ci");
  int c_gp = col("goodput"), c_gp_ci = col("goodput_ci");
  std::string axis = "axis value";

  std::vector<std::string> ticks;
  PlotSeries lat{"overall", {}, {}}, lat_s{"streaming", {}, {}}, lat_b{"bursty", {}, {}};
  PlotSeries del{"overall", {}, {}}, del_s{"streaming", {}, {}}, del_b{"bursty", {}, {}};
  PlotSeries gp{"goodput", {}, {}};
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f = split_csv_line(line);
    if (f.size() < header.size()) continue;
    axis = f[0];
    ticks.push_back(f[c_value]);
    auto push = [&](PlotSeries& s, int cv, int cc) {
      s.y.push_back(std::atof(f[cv].c_str()));
      s.ci.push_back(std::atof(f[cc].c_str()));
    };
    push(lat, c_lat, c_lat_ci);
    push(lat_s, c_ls, c_ls_ci);
    push(lat_b, c_lb, c_lb_ci);
    push(del, c_del, c_del_ci);
    push(del_s, c_ds, c_ds_ci);
    push(del_b, c_db, c_db_ci);
    push(gp, c_gp, c_gp_ci);
  }
  auto drop_if_flat = [](std::vector<PlotSeries>& v, const PlotSeries& s) {
    for (double y : s.y)
      if (y != 0.0) {
        v.push_back(s);
        return;
      }
  };
  std::vector<PlotSeries> lat_series{lat}, del_series{del};
  drop_if_flat(lat_series, lat_s);
  drop_if_flat(lat_series, lat_b);
  drop_if_flat(del_series, del_s);
  drop_if_flat(del_series, del_b);

  fs::create_directories(out_dir);
  const fs::path root(out_dir);
  write_file(root / "latency.svg",
             line_chart_svg("Mean latency", axis, ticks, "slots", lat_series));
  write_file(root / "delivery.svg",
             line_chart_svg("Delivery ratio", axis, ticks, "fraction", del_series));
  write_file(root / "goodput.svg",
             line_chart_svg("Goodput", axis, ticks, "packets/slot", {gp}));
}

std::vector<std::string> audit_run_dir(const std::string& run_dir) {
  int ti = 0, fi = 0;
  ScenarioConfig cfg = load_config((fs::path(run_dir) / "manifest.ini").string(), &ti, &fi);
  RunResult res = run_scenario(cfg, ti, fi, /*force_debug_checks=*/true);

  const fs::path tmp = fs::path(run_dir) / ".audit";
  fs::remove_all(tmp);
  emit_outputs(tmp.string(), cfg, res, ti, fi);

  std::vector<std::string> bad;
  for (const std::string& name : run_file_list(res.has_rho)) {
    auto orig = read_file(fs::path(run_dir) / name);
    auto fresh = read_file(tmp / name);
    if (!orig || !fresh || *orig != *fresh) bad.push_back(name);
  }
  fs::remove_all(tmp);
  return bad;
}

}  // namespace antbp
