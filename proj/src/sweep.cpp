#include <exception>

#include "antbp/harness.hpp"

namespace antbp {

SweepTable run_sweep(const ScenarioConfig& base, const std::string& axis,
                     const std::vector<std::string>& values, int seeds) {
  if (seeds < 1) throw ConfigError("sweep needs at least one seed");
  // surface bad axis values before any cell runs
  for (const std::string& v : values) {
    ScenarioConfig probe = base;
    apply_config_value(probe, axis, v);
    validate_config(probe);
  }

  SweepTable table;
  table.axis = axis;
  table.values = values;
  table.seeds = seeds;
  table.cells.resize(values.size() * size_t(seeds));
  for (size_t vi = 0; vi < values.size(); ++vi)
    for (int si = 0; si < seeds; ++si) {
      SweepCell& cell = table.cells[vi * size_t(seeds) + si];
      cell.value = values[vi];
      cell.seed_index = si;
      cell.topology_index = si / base.flows_per_topology;
      cell.flow_index = si % base.flows_per_topology;
    }

  const int total = int(table.cells.size());
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < total; ++k) {
    SweepCell& cell = table.cells[k];
    try {
      ScenarioConfig cfg = base;
      apply_config_value(cfg, axis, cell.value);
      RunResult r = run_scenario(cfg, cell.topology_index, cell.flow_index);
      cell.metrics = r.metrics;
      cell.ok = true;
    } catch (const std::exception& e) {
      cell.error = e.what();  // the sweep keeps going; the cell reports red
    }
  }
  return table;
}

}  // namespace antbp
