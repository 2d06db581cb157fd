#include "closure.hpp"

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boykov_kolmogorov_max_flow.hpp>

#include <cmath>

namespace monoreg::detail {

namespace {

using Traits = boost::adjacency_list_traits<boost::vecS, boost::vecS, boost::directedS>;
using Edge = Traits::edge_descriptor;
using Graph = boost::adjacency_list<
    boost::vecS, boost::vecS, boost::directedS,
    boost::property<boost::vertex_index_t, long,
                    boost::property<boost::vertex_color_t, boost::default_color_type,
                                    boost::property<boost::vertex_distance_t, long,
                                                    boost::property<boost::vertex_predecessor_t, Edge>>>>,
    boost::property<boost::edge_capacity_t, double,
                    boost::property<boost::edge_residual_capacity_t, double,
                                    boost::property<boost::edge_reverse_t, Edge>>>>;

}  // namespace

// Boykov-Kolmogorov handles the long augmenting paths of grid DAGs far better
// than level-graph methods. Vertices left in the source tree form the set
// reachable from s in the residual graph, i.e. the minimal optimal closure.
ClosureResult max_weight_closure(std::span<const double> weight,
                                 std::span<const std::pair<std::size_t, std::size_t>> arcs) {
  const std::size_t n = weight.size();
  ClosureResult out;
  out.in_set.assign(n, false);
  if (n == 0) return out;

  Graph g(n + 2);
  auto cap = get(boost::edge_capacity, g);
  auto rev = get(boost::edge_reverse, g);
  auto add = [&](std::size_t u, std::size_t v, double c) {
    const Edge e = add_edge(u, v, g).first;
    const Edge r = add_edge(v, u, g).first;
    cap[e] = c;
    cap[r] = 0.0;
    rev[e] = r;
    rev[r] = e;
  };
  const std::size_t s = n, t = n + 1;
  double infinite = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    infinite += std::abs(weight[i]);
    if (weight[i] > 0.0)
      add(s, i, weight[i]);
    else if (weight[i] < 0.0)
      add(i, t, -weight[i]);
  }
  infinite *= 4.0;
  for (const auto& [u, v] : arcs) add(u, v, infinite);

  boost::boykov_kolmogorov_max_flow(g, s, t);

  auto color = get(boost::vertex_color, g);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    if (color[i] == boost::black_color) {
      out.in_set[i] = true;
      total += weight[i];
    }
  out.weight = total;
  return out;
}

}  // namespace monoreg::detail
