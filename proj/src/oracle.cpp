#include "mtsp/oracle.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "mtsp/errors.hpp"

namespace mtsp {

std::vector<double> Schedule::served(std::size_t n_links) const {
  std::vector<double> out(n_links, 0.0);
  for (const auto& e : entries) {
    const auto& members = e.group.members();
    for (std::size_t p = 0; p < members.size(); ++p) out.at(members[p]) += e.rates[p] * e.duration;
  }
  return out;
}

std::vector<double> simulate_schedule(const Instance& instance, const Schedule& schedule,
                                      const RateSource& rates) {
  std::vector<double> residual = instance.demands;
  for (const auto& e : schedule.entries) {
    const auto r = rates.group_rates(e.group);
    const auto& members = e.group.members();
    for (std::size_t p = 0; p < members.size(); ++p) {
      residual.at(members[p]) -= r[p] * e.duration;
    }
  }
  return residual;
}

double tdma_length(const Instance& instance, const RateSource& rates) {
  double total = 0.0;
  for (int link : instance.active_links()) {
    total += instance.demands[link] / rates.group_rates(Group({link}))[0];
  }
  return total;
}

OracleResult brute_force_solve(const Instance& instance, const RateSource& rates,
                               const LpOptions& options) {
  if (instance.n_links() > kOracleMaxLinks) {
    throw Refusal("oracle refuses N = " + std::to_string(instance.n_links()) + " (cap " +
                  std::to_string(kOracleMaxLinks) + ")");
  }
  OracleResult out;
  out.rows = instance.active_links();
  const std::size_t m = out.rows.size();
  if (m == 0) return out;

  const std::uint64_t n_cols = (std::uint64_t{1} << m) - 1;
  LpProblem lp(m, 0);
  for (std::size_t r = 0; r < m; ++r) lp.b()[r] = instance.demands[out.rows[r]];

  std::vector<Group> groups;
  groups.reserve(n_cols);
  std::vector<double> column(m);
  for (std::uint64_t mask = 1; mask <= n_cols; ++mask) {
    std::vector<int> members;
    for (std::size_t r = 0; r < m; ++r) {
      if (mask >> r & 1U) members.push_back(out.rows[r]);
    }
    Group g(std::move(members));
    const auto r = rates.group_rates(g);
    std::fill(column.begin(), column.end(), 0.0);
    std::size_t p = 0;
    for (std::size_t row = 0; row < m; ++row) {
      if (mask >> row & 1U) column[row] = r[p++];
    }
    lp.add_column(column, 1.0);
    groups.push_back(std::move(g));
  }
  out.columns = groups.size();

  out.lp = solve(lp, options);
  if (out.lp.status != LpStatus::kOptimal) {
    throw std::runtime_error(std::string("oracle LP ended ") + to_string(out.lp.status));
  }
  for (std::size_t j = 0; j < groups.size(); ++j) {
    const double t = out.lp.x[j];
    if (t <= 0.0) continue;
    std::vector<double> r;
    for (std::size_t row = 0; row < m; ++row) {
      if (groups[j].contains(out.rows[row])) r.push_back(lp.a(row, j));
    }
    out.schedule.entries.push_back({groups[j], t, std::move(r)});
    out.schedule.total += t;
  }
  return out;
}

}  // namespace mtsp
