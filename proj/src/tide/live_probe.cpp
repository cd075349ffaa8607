// Copyright 2026 The IslandRun Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

#include "islandrun/tide.hpp"

namespace islandrun::tide {
namespace {

struct CpuTimes {
  std::uint64_t busy = 0;
  std::uint64_t total = 0;
};

bool read_cpu(CpuTimes& out) {
  std::ifstream in("/proc/stat");
  std::string label;
  if (!(in >> label) || label != "cpu") return false;
  std::uint64_t v[8] = {};
  for (auto& x : v) {
    if (!(in >> x)) return false;
  }
  // user nice system idle iowait irq softirq steal
  const std::uint64_t idle = v[3] + v[4];
  out.total = 0;
  for (auto x : v) out.total += x;
  out.busy = out.total - idle;
  return true;
}

bool read_memory(double& used, double& total) {
  std::ifstream in("/proc/meminfo");
  std::string line;
  double mem_total = -1.0;
  double mem_available = -1.0;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string key;
    double kb = 0.0;
    fields >> key >> kb;
    if (key == "MemTotal:") mem_total = kb * 1024.0;
    if (key == "MemAvailable:") mem_available = kb * 1024.0;
  }
  if (mem_total <= 0.0 || mem_available < 0.0) return false;
  total = mem_total;
  used = std::min(mem_total, std::max(0.0, mem_total - mem_available));
  return true;
}

}  // namespace

CapacitySnapshot LiveProbeSource::sample(Tick t) const {
  CpuTimes now;
  double used = 0.0;
  double total = 0.0;
  if (!read_cpu(now) || !read_memory(used, total)) return idle_snapshot(t);

  double cpu_pct = 0.0;
  {
    std::lock_guard lock(mutex_);
    if (last_total_ != 0 && now.total > last_total_) {
      cpu_pct = 100.0 * static_cast<double>(now.busy - last_busy_) /
                static_cast<double>(now.total - last_total_);
    }
    last_busy_ = now.busy;
    last_total_ = now.total;
  }
  cpu_pct = std::min(100.0, std::max(0.0, cpu_pct));
  return make_snapshot(t, cpu_pct, 0.0, used, total);
}

}  // namespace islandrun::tide
