#include "phom/persistence.hpp"

#include <algorithm>
#include <cstdint>

namespace phom {
namespace {

using Column = std::vector<std::uint32_t>;
constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

// target <- target + source over Z/2 (symmetric difference of sorted rows).
void add_column(Column& target, const Column& source, Column& scratch) {
  scratch.clear();
  std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                std::back_inserter(scratch));
  target.swap(scratch);
}

}  // namespace

void PersistenceDiagram::normalize() { std::sort(pairs.begin(), pairs.end()); }

PersistenceDiagram PersistenceDiagram::restricted(int dim) const {
  PersistenceDiagram out;
  out.threshold = threshold;
  for (const auto& p : pairs)
    if (p.dim == dim) out.pairs.push_back(p);
  return out;
}

std::size_t PersistenceDiagram::count(int dim) const {
  return static_cast<std::size_t>(
      std::count_if(pairs.begin(), pairs.end(), [dim](const auto& p) { return p.dim == dim; }));
}

std::size_t PersistenceDiagram::essential_count(int dim) const {
  return static_cast<std::size_t>(std::count_if(
      pairs.begin(), pairs.end(), [dim](const auto& p) { return p.dim == dim && p.essential(); }));
}

std::size_t Barcode::count(int dim) const {
  auto it = bars.find(dim);
  return it == bars.end() ? 0 : it->second.size();
}

PersistenceDiagram Barcode::to_diagram() const {
  PersistenceDiagram out;
  out.threshold = threshold;
  for (const auto& [dim, intervals] : bars)
    for (const auto& iv : intervals) out.pairs.push_back({dim, iv.birth, iv.death});
  out.normalize();
  return out;
}

Barcode barcodes(const PersistenceDiagram& diagram) {
  Barcode out;
  out.threshold = diagram.threshold;
  for (const auto& p : diagram.pairs) out.bars[p.dim].push_back({p.birth, p.death});
  for (auto& [dim, intervals] : out.bars)
    std::sort(intervals.begin(), intervals.end(), [](const Interval& a, const Interval& b) {
      return a.birth != b.birth ? a.birth < b.birth : a.death < b.death;
    });
  return out;
}

PersistenceDiagram compute_persistence(const Filtration& f) {
  check_filtration(f);
  const auto& simplices = f.simplices;
  const std::size_t total = simplices.size();
  const std::size_t n = f.n_vertices;

  // Positions of vertices and edges, for boundary assembly.
  std::vector<std::uint32_t> vertex_pos(n, kNone);
  std::vector<std::uint32_t> edge_pos(n * n, kNone);
  for (std::uint32_t idx = 0; idx < total; ++idx) {
    const Simplex& s = simplices[idx];
    if (s.count == 1) vertex_pos[s.vertices[0]] = idx;
    if (s.count == 2) edge_pos[s.vertices[0] * n + s.vertices[1]] = idx;
  }
  auto boundary = [&](const Simplex& s) {
    Column col;
    if (s.count == 2) {
      col = {vertex_pos[s.vertices[0]], vertex_pos[s.vertices[1]]};
    } else if (s.count == 3) {
      const auto [a, b, c] = s.vertices;
      col = {edge_pos[a * n + b], edge_pos[a * n + c], edge_pos[b * n + c]};
    }
    std::sort(col.begin(), col.end());
    return col;
  };

  std::vector<Column> reduced(total);
  std::vector<std::uint32_t> pivot_owner(total, kNone);  // row -> column whose low it is
  std::vector<bool> cleared(total, false);
  Column scratch;

  // Higher dimension first so that pivots of triangle columns clear their edges.
  for (int dim = f.max_dim; dim >= 1; --dim) {
    for (std::uint32_t j = 0; j < total; ++j) {
      const Simplex& s = simplices[j];
      if (s.dim() != dim || cleared[j]) continue;
      Column col = boundary(s);
      while (!col.empty()) {
        const std::uint32_t owner = pivot_owner[col.back()];
        if (owner == kNone) break;
        add_column(col, reduced[owner], scratch);
      }
      if (!col.empty()) {
        const std::uint32_t low = col.back();
        pivot_owner[low] = j;
        cleared[low] = true;
        reduced[j] = std::move(col);
      }
    }
  }

  PersistenceDiagram out;
  out.threshold = f.threshold;
  for (std::uint32_t i = 0; i < total; ++i) {
    const Simplex& s = simplices[i];
    if (s.dim() >= f.max_dim) continue;
    if (!reduced[i].empty()) continue;  // negative simplex: kills a class
    const std::uint32_t killer = pivot_owner[i];
    if (killer == kNone) {
      out.pairs.push_back({s.dim(), s.value, kInfinity});
    } else if (simplices[killer].value > s.value) {
      out.pairs.push_back({s.dim(), s.value, simplices[killer].value});
    }
  }
  out.normalize();
  return out;
}

}  // namespace phom
