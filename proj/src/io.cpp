#include "sspt/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sspt {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string schedule_name(SlabSchedule schedule) {
  switch (schedule) {
    case SlabSchedule::kExponential: return "exponential";
    case SlabSchedule::kExponentialNormalized: return "exponential-normalized";
    case SlabSchedule::kLLogL: return "l-log-l";
  }
  throw std::logic_error("schedule_name: unknown schedule");
}

SlabSchedule schedule_from_name(const std::string& name) {
  if (name == "exponential") return SlabSchedule::kExponential;
  if (name == "exponential-normalized") return SlabSchedule::kExponentialNormalized;
  if (name == "l-log-l") return SlabSchedule::kLLogL;
  throw std::invalid_argument("unknown schedule: " + name);
}

ordered_json posterior_to_json(const PosteriorTree& post, std::uint64_t seed) {
  ordered_json doc;
  doc["schema_version"] = 1;
  doc["kind"] = "sspt-posterior";
  doc["n"] = post.total();
  doc["seed"] = seed;
  doc["prior"] = {{"a", post.prior().a},
                  {"kappa", post.prior().kappa},
                  {"schedule", schedule_name(post.prior().schedule)},
                  {"l0", post.prior().flat_depth},
                  {"depth", post.prior().depth}};
  ordered_json levels = ordered_json::array();
  for (int l = 0; l < post.depth(); ++l) {
    ordered_json level = ordered_json::array();
    for (std::int64_t k = 0; k < (std::int64_t{1} << l); ++k) {
      const NodePosterior np = post.node(l, k);
      level.push_back({{"n0", np.alpha0 - post.prior().a},
                       {"n1", np.alpha1 - post.prior().a},
                       {"pi_tilde", np.pi_tilde}});
    }
    levels.push_back(std::move(level));
  }
  doc["nodes"] = std::move(levels);
  return doc;
}

PosteriorTree posterior_from_json(const ordered_json& doc) {
  if (doc.at("schema_version").get<int>() != 1)
    throw std::invalid_argument("posterior_from_json: unsupported schema");
  PriorSpec prior;
  const auto& p = doc.at("prior");
  prior.a = p.at("a").get<int>();
  prior.kappa = p.at("kappa").get<double>();
  prior.schedule = schedule_from_name(p.at("schedule").get<std::string>());
  prior.flat_depth = p.at("l0").get<int>();
  prior.depth = p.at("depth").get<int>();

  CountTree counts(prior.depth);
  counts.total = doc.at("n").get<std::int64_t>();
  counts.counts.at(0, 0) = counts.total;
  const auto& levels = doc.at("nodes");
  for (int l = 0; l < prior.depth; ++l) {
    const auto& level = levels.at(std::size_t(l));
    for (std::int64_t k = 0; k < (std::int64_t{1} << l); ++k) {
      const auto& node = level.at(std::size_t(k));
      counts.counts.at(l + 1, 2 * k) = node.at("n0").get<std::int64_t>();
      counts.counts.at(l + 1, 2 * k + 1) = node.at("n1").get<std::int64_t>();
    }
  }
  return PosteriorTree(std::move(counts), prior);
}

ordered_json band_result_to_json(const BandResult& result) {
  ordered_json doc;
  doc["schema_version"] = 1;
  doc["kind"] = "sspt-band";
  doc["Rn"] = result.Rn;
  doc["alpha_hat"] = result.alpha_hat;
  doc["L_hat"] = result.L_hat;
  doc["u_n"] = result.u_n;
  doc["gamma"] = result.gamma;
  if (result.member.has_value())
    doc["member"] = *result.member;
  else
    doc["member"] = nullptr;
  doc["diameter_proxy"] = result.diameter_proxy;
  doc["accepted"] = result.accepted;
  doc["draws"] = result.draws;
  doc["seed"] = result.seed;
  return doc;
}

std::vector<double> read_sample_file(const std::filesystem::path& path,
                                     std::size_t* bad_line) {
  *bad_line = 0;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path.string());
  std::vector<double> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    // Trim whitespace; blank lines are permitted.
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    const std::string tok = line.substr(b, e - b + 1);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      *bad_line = lineno;
      return out;
    }
    if (used != tok.size() || !(v > 0.0) || !(v <= 1.0)) {
      *bad_line = lineno;
      return out;
    }
    out.push_back(v);
  }
  return out;
}

void write_density_csv(const std::filesystem::path& path,
                       const HistogramDensity& hist) {
  std::ostringstream os;
  os << "k,x_lo,x_hi,height\n";
  for (std::size_t k = 0; k < hist.heights().size(); ++k) {
    const auto [lo, hi] = interval_of(NodeIndex(hist.depth(), std::int64_t(k)));
    os << k << ',' << format_double(lo) << ',' << format_double(hi) << ','
       << format_double(hist.heights()[k]) << '\n';
  }
  write_text_file(path, os.str());
}

void write_field_support_csv(const std::filesystem::path& path,
                             const WaveletField& field) {
  std::ostringstream os;
  os << "level,position,coeff\n";
  for (int l = 0; l < field.depth(); ++l)
    for (std::int64_t k = 0; k < (std::int64_t{1} << l); ++k)
      if (field.at(l, k) != 0.0)
        os << l << ',' << k << ',' << format_double(field.at(l, k)) << '\n';
  write_text_file(path, os.str());
}

void write_report_csv(const std::filesystem::path& path,
                      const ExperimentReport& report) {
  std::ostringstream os;
  os << "mode,alpha,n,rep,seed,sup_err_mean,sup_err_draws,L_hat,alpha_hat,"
        "Rn,covered,credibility,diameter_proxy,accepted\n";
  for (const auto& r : report.records) {
    os << r.mode << ',' << format_double(r.alpha) << ',' << r.n << ',' << r.rep
       << ',' << r.seed << ',' << format_double(r.sup_err_mean) << ','
       << format_double(r.sup_err_draws) << ',' << r.L_hat << ','
       << format_double(r.alpha_hat) << ',' << format_double(r.Rn) << ','
       << r.covered << ',' << format_double(r.credibility) << ','
       << format_double(r.diameter_proxy) << ',' << r.accepted << '\n';
  }
  write_text_file(path, os.str());
}

void write_bvm_csv(const std::filesystem::path& path, const BvmReport& report) {
  std::ostringstream os;
  os << "level,position,ks,variance,pass\n";
  for (const auto& c : report.coords)
    os << c.level << ',' << c.position << ',' << format_double(c.ks) << ','
       << format_double(c.variance) << ',' << (c.pass ? 1 : 0) << '\n';
  write_text_file(path, os.str());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << text;
}

}  // namespace sspt
