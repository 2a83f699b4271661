#include "psel/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "psel/errors.hpp"

namespace psel {

using nlohmann::json;

bool PenaltyMatrix::unique_rows() const {
  const int m = size();
  for (int p = 0; p < m; ++p) {
    for (int i = 0; i < m; ++i) {
      for (int j = i + 1; j < m; ++j) {
        if (xi_[p][i] == xi_[p][j]) return false;
      }
    }
  }
  return m > 0;
}

Instance Instance::with_likelihoods(HypothesisSet h, PenaltyMatrix xi,
                                    std::vector<SourceModel> sources) {
  Instance inst;
  inst.hypotheses = std::move(h);
  inst.penalties = std::move(xi);
  inst.backing = Backing::Likelihood;
  inst.likelihood_sources = std::move(sources);
  return inst;
}

Instance Instance::with_partitions(HypothesisSet h, PenaltyMatrix xi,
                                   std::vector<PartitionModel> sources) {
  Instance inst;
  inst.hypotheses = std::move(h);
  inst.penalties = std::move(xi);
  inst.backing = Backing::Partition;
  inst.partition_sources = std::move(sources);
  return inst;
}

double Instance::source_cost(int i) const {
  if (i < 0 || i >= num_sources()) throw std::out_of_range("source index out of range");
  return backing == Backing::Likelihood ? likelihood_sources[i].cost : partition_sources[i].cost;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

void validate_penalties(const PenaltyMatrix& xi, int m, std::vector<std::string>& out) {
  if (xi.size() != m) {
    out.push_back("penalty matrix has " + std::to_string(xi.size()) + " rows, expected " +
                  std::to_string(m));
    return;
  }
  for (int p = 0; p < m; ++p) {
    if (static_cast<int>(xi.rows()[p].size()) != m) {
      out.push_back("penalty matrix row " + std::to_string(p) + " has " +
                    std::to_string(xi.rows()[p].size()) + " entries, expected " +
                    std::to_string(m));
      return;
    }
  }
  for (int p = 0; p < m; ++p) {
    double sum = 0;
    for (int q = 0; q < m; ++q) {
      const double v = xi(p, q);
      if (!(v >= 0.0 && v <= 1.0)) {
        out.push_back("penalty entry (" + std::to_string(p) + "," + std::to_string(q) + ") = " +
                      fmt(v) + " outside [0,1]");
      }
      sum += v;
    }
    if (xi(p, p) != 0.0) {
      out.push_back("nonzero diagonal: penalty entry (" + std::to_string(p) + "," +
                    std::to_string(p) + ") = " + fmt(xi(p, p)) + ", expected 0");
    }
    if (std::abs(sum - 1.0) > kStochasticTol) {
      out.push_back("penalty row " + std::to_string(p) + " sums to " + fmt(sum) +
                    ", expected 1 (row stochastic)");
    }
  }
}

void validate_likelihood_source(const SourceModel& s, int index, int m,
                                std::vector<std::string>& out) {
  const std::string tag = "source " + std::to_string(index);
  if (s.cost < 0.0) out.push_back(tag + ": negative cost " + fmt(s.cost));
  if (s.likelihood.empty()) {
    out.push_back(tag + ": empty observation space");
    return;
  }
  for (std::size_t o = 0; o < s.likelihood.size(); ++o) {
    if (static_cast<int>(s.likelihood[o].size()) != m) {
      out.push_back(tag + ": likelihood row " + std::to_string(o) + " has " +
                    std::to_string(s.likelihood[o].size()) + " entries, expected " +
                    std::to_string(m));
      return;
    }
  }
  for (int q = 0; q < m; ++q) {
    double col = 0;
    for (std::size_t o = 0; o < s.likelihood.size(); ++o) {
      const double v = s.likelihood[o][q];
      if (!(v > 0.0)) {
        out.push_back(tag + ": zero likelihood, entry (o=" + std::to_string(o) +
                      ", theta=" + std::to_string(q) + ") = " + fmt(v) +
                      " must be strictly positive");
      }
      col += v;
    }
    if (std::abs(col - 1.0) > kStochasticTol) {
      out.push_back(tag + ": likelihood column for theta " + std::to_string(q) + " sums to " +
                    fmt(col) + ", expected 1");
    }
  }
}

void validate_partition_source(const PartitionModel& s, int index, int m,
                               std::vector<std::string>& out) {
  const std::string tag = "source " + std::to_string(index);
  if (s.cost < 0.0) out.push_back(tag + ": negative cost " + fmt(s.cost));
  std::vector<int> seen(m, 0);
  for (std::size_t b = 0; b < s.blocks.size(); ++b) {
    if (s.blocks[b].empty()) out.push_back(tag + ": partition block " + std::to_string(b) + " is empty");
    for (int q : s.blocks[b]) {
      if (q < 0 || q >= m) {
        out.push_back(tag + ": partition block " + std::to_string(b) +
                      " contains out-of-range hypothesis index " + std::to_string(q));
        continue;
      }
      ++seen[q];
    }
  }
  for (int q = 0; q < m; ++q) {
    if (seen[q] == 0)
      out.push_back(tag + ": hypothesis " + std::to_string(q) + " not covered by any block");
    if (seen[q] > 1)
      out.push_back(tag + ": hypothesis " + std::to_string(q) + " appears in multiple blocks");
  }
}

}  // namespace

std::vector<std::string> validate(const Instance& inst) {
  std::vector<std::string> out;
  const int m = inst.num_hypotheses();
  if (m < 1) out.push_back("hypothesis set is empty");
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      if (inst.hypotheses.labels[i] == inst.hypotheses.labels[j]) {
        out.push_back("duplicate hypothesis label '" + inst.hypotheses.labels[i] + "'");
      }
    }
  }
  validate_penalties(inst.penalties, m, out);

  const bool lik = inst.backing == Backing::Likelihood;
  if (lik && !inst.partition_sources.empty())
    out.push_back("likelihood backing but partition sources present");
  if (!lik && !inst.likelihood_sources.empty())
    out.push_back("partition backing but likelihood sources present");
  if (inst.num_sources() < 1) out.push_back("instance has no information sources");

  for (int i = 0; i < inst.num_sources(); ++i) {
    if (lik)
      validate_likelihood_source(inst.likelihood_sources[i], i, m, out);
    else
      validate_partition_source(inst.partition_sources[i], i, m, out);
  }
  return out;
}

double cost_of(const Instance& inst, std::span<const int> subset) {
  double total = 0;
  for (int i : subset) total += inst.source_cost(i);
  return total;
}

double kl_source(const Instance& inst, int source, int theta_p, int theta_q) {
  if (inst.backing != Backing::Likelihood)
    throw BackingError("kl_source requires a likelihood-backed instance");
  if (source < 0 || source >= inst.num_sources())
    throw std::out_of_range("source index out of range");
  const int m = inst.num_hypotheses();
  if (theta_p < 0 || theta_p >= m || theta_q < 0 || theta_q >= m)
    throw std::out_of_range("hypothesis index out of range");
  const auto& table = inst.likelihood_sources[source].likelihood;
  double kl = 0;
  for (const auto& row : table) {
    kl += row[theta_p] * std::log(row[theta_p] / row[theta_q]);
  }
  return kl;
}

double kl_set(const Instance& inst, std::span<const int> subset, int theta_p, int theta_q) {
  double kl = 0;
  for (int s : subset) kl += kl_source(inst, s, theta_p, theta_q);
  return kl;
}

double compute_L(const Instance& inst) {
  if (inst.backing != Backing::Likelihood)
    throw BackingError("compute_L requires a likelihood-backed instance");
  double L = 0;
  for (const auto& src : inst.likelihood_sources) {
    for (const auto& row : src.likelihood) {
      double lo = row[0], hi = row[0];
      for (double v : row) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      L = std::max(L, std::log(hi) - std::log(lo));
    }
  }
  return L;
}

namespace {

Instance instance_from_json(const json& doc, bool renormalize) {
  if (!doc.is_object()) throw InputError("instance document must be a JSON object");
  if (!doc.contains("hypotheses") || !doc.contains("penalties") || !doc.contains("sources"))
    throw InputError("instance document needs 'hypotheses', 'penalties' and 'sources'");

  HypothesisSet hypos;
  for (const auto& h : doc.at("hypotheses")) hypos.labels.push_back(h.get<std::string>());

  std::vector<std::vector<double>> rows;
  for (const auto& r : doc.at("penalties")) rows.push_back(r.get<std::vector<double>>());
  if (renormalize) {
    for (auto& r : rows) {
      double sum = 0;
      for (double v : r) sum += v;
      if (sum > 0) {
        for (double& v : r) v /= sum;
      }
    }
  }

  bool any_lik = false, any_part = false;
  std::vector<SourceModel> lik_sources;
  std::vector<PartitionModel> part_sources;
  for (const auto& s : doc.at("sources")) {
    if (!s.contains("cost")) throw InputError("every source needs a 'cost'");
    const double cost = s.at("cost").get<double>();
    if (s.contains("likelihood") && s.contains("partition"))
      throw InputError("source carries both a likelihood table and a partition");
    if (s.contains("likelihood")) {
      any_lik = true;
      SourceModel sm;
      sm.cost = cost;
      for (const auto& r : s.at("likelihood")) sm.likelihood.push_back(r.get<std::vector<double>>());
      lik_sources.push_back(std::move(sm));
    } else if (s.contains("partition")) {
      any_part = true;
      PartitionModel pm;
      pm.cost = cost;
      for (const auto& b : s.at("partition")) pm.blocks.push_back(b.get<std::vector<int>>());
      part_sources.push_back(std::move(pm));
    } else {
      throw InputError("source needs either a 'likelihood' table or a 'partition'");
    }
  }
  if (any_lik && any_part) throw InputError("mixed source backings in one instance");

  if (any_lik)
    return Instance::with_likelihoods(std::move(hypos), PenaltyMatrix(std::move(rows)),
                                      std::move(lik_sources));
  return Instance::with_partitions(std::move(hypos), PenaltyMatrix(std::move(rows)),
                                   std::move(part_sources));
}

}  // namespace

Instance parse_instance_json(const std::string& text, bool renormalize_penalty_rows) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw InputError(std::string("invalid instance JSON: ") + e.what());
  }
  try {
    return instance_from_json(doc, renormalize_penalty_rows);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed instance document: ") + e.what());
  }
}

Instance load_instance(const std::string& path, bool renormalize_penalty_rows) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open instance file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance_json(buf.str(), renormalize_penalty_rows);
}

std::string instance_to_json(const Instance& inst) {
  json doc;
  doc["hypotheses"] = inst.hypotheses.labels;
  doc["penalties"] = inst.penalties.rows();
  json sources = json::array();
  if (inst.backing == Backing::Likelihood) {
    for (const auto& s : inst.likelihood_sources)
      sources.push_back({{"cost", s.cost}, {"likelihood", s.likelihood}});
  } else {
    for (const auto& s : inst.partition_sources)
      sources.push_back({{"cost", s.cost}, {"partition", s.blocks}});
  }
  doc["sources"] = std::move(sources);
  return doc.dump(2);
}

}  // namespace psel
