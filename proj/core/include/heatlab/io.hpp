#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heatlab/graph.hpp"
#include "heatlab/heat.hpp"
#include "heatlab/metric.hpp"

namespace heatlab {

// Graph JSON: {"vertices":[{"id","m"}],"edges":[{"u","v","b"}]}; floats
// round-trip exact to 17 significant digits.
std::string graph_to_json(const Graph& g);
Graph graph_from_json(const std::string& text);
void save_graph(const Graph& g, const std::string& path);
Graph load_graph(const std::string& path);

// Shortest decimal that round-trips a double.
std::string format_double(double v);

// Metric CSV: provenance header line, then rows x_id,y_id,value.
std::string metric_csv(const Graph& g, const PseudoMetric& rho,
                       const std::vector<std::pair<int, int>>& pairs);

// Kernel CSV rows (t, x_id, y_id, value, log_value, backend, radius).
std::string kernel_csv(const Graph& g, const HeatKernelSlice& slice);

std::string to_string(KernelBackend b);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

// FNV-1a over the canonical config string; embedded in outputs.
std::uint64_t config_hash(const std::string& canonical);

}  // namespace heatlab
