#include "mchit/io.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include <json.hpp>

namespace mchit::io {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ParseError, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Mat matrix_from_rows(const std::vector<std::vector<double>>& rows) {
  size_t n = rows.size();
  if (n == 0) throw Error(Errc::ParseError, "matrix P is empty");
  Mat p(n, n);
  for (size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      std::ostringstream os;
      os << "row " << i << " has " << rows[i].size() << " entries, expected "
         << n;
      throw Error(Errc::ParseError, os.str());
    }
    for (size_t k = 0; k < n; ++k) p(i, k) = rows[i][k];
  }
  return p;
}

}  // namespace

ChainFile parse_chain_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::ParseError, e.what());
  }
  if (!doc.is_object() || !doc.contains("P"))
    throw Error(Errc::ParseError, "expected an object with a \"P\" matrix");
  std::vector<std::vector<double>> rows;
  try {
    rows = doc.at("P").get<std::vector<std::vector<double>>>();
  } catch (const json::exception& e) {
    throw Error(Errc::ParseError, std::string("field \"P\": ") + e.what());
  }
  ChainFile cf;
  cf.transition = matrix_from_rows(rows);
  if (doc.contains("states")) {
    try {
      cf.states = doc.at("states").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
      throw Error(Errc::ParseError,
                  std::string("field \"states\": ") + e.what());
    }
    if (cf.states.size() != static_cast<size_t>(cf.transition.rows()))
      throw Error(Errc::ParseError, "states and P dimensions disagree");
  } else {
    for (Eigen::Index i = 0; i < cf.transition.rows(); ++i)
      cf.states.push_back(std::to_string(i));
  }
  return cf;
}

ChainFile load_chain_json(const std::string& path) {
  return parse_chain_json(read_file(path));
}

ChainFile parse_chain_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    int field = 0;
    while (std::getline(ls, cell, ',')) {
      ++field;
      try {
        size_t used = 0;
        double v = std::stod(cell, &used);
        while (used < cell.size() &&
               std::isspace(static_cast<unsigned char>(cell[used])))
          ++used;
        if (used != cell.size()) throw std::invalid_argument("trailing junk");
        row.push_back(v);
      } catch (const std::exception&) {
        std::ostringstream os;
        os << "line " << lineno << ", field " << field << ": '" << cell
           << "' is not a number";
        throw Error(Errc::ParseError, os.str());
      }
    }
    rows.push_back(std::move(row));
  }
  ChainFile cf;
  cf.transition = matrix_from_rows(rows);
  for (Eigen::Index i = 0; i < cf.transition.rows(); ++i)
    cf.states.push_back(std::to_string(i));
  return cf;
}

ChainFile load_chain_csv(const std::string& path) {
  return parse_chain_csv(read_file(path));
}

std::string chain_to_json(const MarkovChain& chain) {
  json doc;
  doc["states"] = chain.states();
  std::vector<std::vector<double>> rows(chain.size());
  for (int i = 0; i < chain.size(); ++i)
    for (int k = 0; k < chain.size(); ++k)
      rows[i].push_back(chain.transition()(i, k));
  doc["P"] = rows;
  return doc.dump(2);
}

MarkovChain two_state_chain(double delta) {
  if (!(delta >= 0.0 && delta < 0.5))
    throw Error(Errc::InvalidParameter, "delta must be in [0, 1/2)");
  Mat p(2, 2);
  p << 0.5, 0.5, 0.5 - delta, 0.5 + delta;
  return MarkovChain(p, {"0", "1"});
}

MarkovChain iid_chain(const Vec& pi) {
  check_prob_vector(pi, 1e-12);
  const Eigen::Index n = pi.size();
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(pi(i) > 0.0))
      throw Error(Errc::InvalidParameter, "pi entries must be positive");
  Mat p(n, n);
  for (Eigen::Index i = 0; i < n; ++i) p.row(i) = pi.transpose();
  return MarkovChain(p, {});
}

MarkovChain birth_death_chain(int size, double up, double down) {
  if (size < 2) throw Error(Errc::InvalidParameter, "size must be >= 2");
  if (!(up > 0.0 && down > 0.0 && up + down < 1.0))
    throw Error(Errc::InvalidParameter,
                "need up > 0, down > 0, up + down < 1");
  Mat p = Mat::Zero(size, size);
  for (int i = 0; i < size; ++i) {
    double stay = 1.0;
    if (i + 1 < size) {
      p(i, i + 1) = up;
      stay -= up;
    }
    if (i > 0) {
      p(i, i - 1) = down;
      stay -= down;
    }
    p(i, i) = stay;
  }
  return MarkovChain(p, {});
}

std::optional<double> match_two_state_delta(const MarkovChain& chain) {
  if (chain.size() != 2) return std::nullopt;
  const Mat& p = chain.transition();
  double delta = p(1, 1) - 0.5;
  if (std::abs(p(0, 0) - 0.5) > 1e-9 || std::abs(p(0, 1) - 0.5) > 1e-9)
    return std::nullopt;
  if (std::abs(p(1, 0) - (0.5 - delta)) > 1e-9) return std::nullopt;
  if (!(delta >= 0.0 && delta < 0.5)) return std::nullopt;
  return delta;
}

MarkovChain random_ergodic_chain(int size, SplitMix64& rng) {
  if (size < 2) throw Error(Errc::InvalidParameter, "size must be >= 2");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Mat p(size, size);
    for (int i = 0; i < size; ++i) {
      double row_sum = 0.0;
      for (int k = 0; k < size; ++k) {
        // Dirichlet(1,...,1) row via normalized exponentials
        double u = rng.uniform();
        double e = -std::log1p(-u);
        p(i, k) = e;
        row_sum += e;
      }
      for (int k = 0; k < size; ++k) p(i, k) /= row_sum;
    }
    try {
      return MarkovChain(p, {});
    } catch (const Error&) {
      continue;  // reducible/periodic draw; redraw
    }
  }
  throw Error(Errc::InvalidParameter,
              "could not draw an ergodic chain in 1000 attempts");
}

}  // namespace mchit::io
