#include "smp/probes.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

namespace smp {

const ProbeSequence* ProbeLibrary::find(const std::string& id) const {
  for (const auto& s : sequences)
    if (s.id == id) return &s;
  return nullptr;
}

double tail_oscillation(const TestFunction& h, const ProbeSequence& seq) {
  if (seq.points.empty()) throw Error("tail_oscillation: empty probe sequence");
  std::size_t w = static_cast<std::size_t>(std::max(2, seq.window));
  std::size_t start = seq.points.size() > w ? seq.points.size() - w : 0;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = start; i < seq.points.size(); ++i) {
    double v = h(seq.points[i]);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}

bool finite_cauchy(const TestFunction& h, const ProbeSequence& seq) {
  return tail_oscillation(h, seq) <= seq.cauchy_tol;
}

void write_probe_csv(const ProbeLibrary& lib, std::ostream& os) {
  os << "sequence_id,index";
  int dim = lib.sequences.empty() ? 1 : static_cast<int>(lib.sequences[0].points[0].dim());
  for (int d = 0; d < dim; ++d) os << ",c" << d;
  os << "\n";
  os.precision(17);
  for (const auto& seq : lib.sequences) {
    for (std::size_t i = 0; i < seq.points.size(); ++i) {
      os << seq.id << ',' << i;
      for (Eigen::Index d = 0; d < seq.points[i].dim(); ++d) os << ',' << seq.points[i].coords[d];
      os << '\n';
    }
  }
}

ProbeLibrary load_probe_csv(std::istream& is) {
  ProbeLibrary lib;
  std::string line;
  if (!std::getline(is, line)) throw Error("probe csv: empty file");
  std::map<std::string, std::size_t> by_id;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string id, field;
    std::getline(ss, id, ',');
    std::getline(ss, field, ',');  // index (rows arrive ordered)
    std::vector<double> coords;
    while (std::getline(ss, field, ',')) coords.push_back(std::stod(field));
    if (coords.empty()) throw Error("probe csv: malformed row: " + line);
    StatePoint p;
    p.coords = Eigen::Map<Eigen::VectorXd>(coords.data(), static_cast<Eigen::Index>(coords.size()));
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      by_id.emplace(id, lib.sequences.size());
      lib.sequences.push_back(ProbeSequence{id, {p}});
    } else {
      lib.sequences[it->second].points.push_back(p);
    }
  }
  return lib;
}

}  // namespace smp
