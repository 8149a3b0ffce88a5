#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <future>
#include <optional>
#include <sstream>
#include <variant>

#include <nlohmann/json.hpp>

#include "convpow/asymptotics.hpp"
#include "convpow/conditions.hpp"
#include "convpow/errors.hpp"
#include "convpow/oracle.hpp"
#include "convpow/renewal.hpp"
#include "convpow/saddle.hpp"
#include "convpow/spec_json.hpp"

namespace convpow::cli {

namespace {

using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

/// Columns plus rows; rendered as CSV or JSON with %.12e floats.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

class IoError : public Error {
 public:
  using Error::Error;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

std::string csv_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return fmt(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  return "";
}

std::string json_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? fmt(*d) : "null";
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  if (const auto* s = std::get_if<std::string>(&c)) return nlohmann::json(*s).dump();
  return "null";
}

/// nlohmann::json rendered with the fixed float format.
std::string dump_fixed(const nlohmann::json& j) {
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      std::string s = "{";
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) s += ",";
        first = false;
        s += nlohmann::json(k).dump() + ":" + dump_fixed(v);
      }
      return s + "}";
    }
    case nlohmann::json::value_t::array: {
      std::string s = "[";
      for (std::size_t i = 0; i < j.size(); ++i) s += (i ? "," : "") + dump_fixed(j[i]);
      return s + "]";
    }
    case nlohmann::json::value_t::number_float: return json_cell(Cell{j.get<double>()});
    default: return j.dump();
  }
}

std::string render(const Table& t, const std::string& command, const std::string& format) {
  std::ostringstream os;
  if (format == "csv") {
    os << "# schema_version=1\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
      os << "\n";
    }
  } else {
    os << "{\"schema_version\":1,\"command\":" << nlohmann::json(command).dump() << ",\"rows\":[";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      os << (r ? "," : "") << "{";
      for (std::size_t i = 0; i < t.columns.size(); ++i)
        os << (i ? "," : "") << nlohmann::json(t.columns[i]).dump() << ":" << json_cell(t.rows[r][i]);
      os << "}";
    }
    os << "]}\n";
  }
  return os.str();
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open output file '" + path + "'");
  f << text;
  if (!f) throw IoError("failed writing output file '" + path + "'");
}

double log_or_nan(const LogNumber& v) { return v.is_zero() ? -INFINITY : v.log_abs(); }

/// Exact V^{*j}(t) for the families that have one, nullopt otherwise.
std::optional<LogNumber> exact_family(const MeasureSpec& spec, std::int64_t j, double t) {
  if (const auto* m = spec.as<PowerLaw>()) return exact_power_law(m->b, m->alpha, j, t);
  if (const auto* m = spec.as<ShiftedExp>()) return exact_shifted_exp(m->a, j, t);
  if (const auto* m = spec.as<Affine>()) return exact_affine(m->a, m->b, j, t);
  return std::nullopt;
}

bool has_exact_family(const MeasureSpec& spec) {
  return spec.as<PowerLaw>() || spec.as<ShiftedExp>() || spec.as<Affine>();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument(std::string("cannot parse ") + what + " '" + s + "'");
  }
}

std::int64_t parse_int(const std::string& s) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument("cannot parse integer '" + s + "'");
  }
}

/// Evaluates fn(i) for i in [0, n) on up to thread_count() threads; results in index order.
template <class T, class F>
std::vector<T> parallel_rows(std::size_t n, F fn) {
  const std::size_t threads = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), n);
  std::vector<T> out(n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < threads; ++w)
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < n; i += threads) out[i] = fn(i);
    }));
  for (auto& j : jobs) j.get();
  return out;
}

struct Options {
  std::string spec;
  std::string schedule;
  std::string formula = "ThmA";
  std::string oracle = "none";
  double h = 1e-3;
  double gamma = 1.0;
  std::string out;
  std::string format = "csv";
  // asym: linear-growth parameters
  double alpha = 0.0;
  double c = 0.0;
  // check / oracle
  std::int64_t j = 0;
  double t = 0.0;
  double z_max_factor = 1e3;
  int points = 200;
  double tj_threshold = 0.2;
  double sup_threshold = 0.98;
  double x_max = 0.0;
  double tilt = -1.0;
  // clt
  double y = 0.0;
  std::string j_list;
  // renewal
  std::string input;
};

Table cmd_asym(const Options& o) {
  const MeasureSpec spec = spec_from_text_or_path(o.spec);
  const auto schedule = parse_schedule(o.schedule);
  if (schedule.empty()) throw InvalidArgument("asym: empty schedule");

  std::vector<Formula> formulas;
  for (const auto& name : split(o.formula, ',')) {
    if (name == "auto") formulas.push_back(auto_formula(schedule));
    else formulas.push_back(formula_from_string(name));
  }
  for (Formula f : formulas) {
    if (f == Formula::CorCLT || f == Formula::LinearExpansion)
      throw InvalidArgument("asym: formula " + to_string(f) + " is served by the clt / renewal subcommands");
    if ((f == Formula::CorLinGrowth_small_y || f == Formula::CorLinGrowth_y_c_j23) && !(o.alpha > 0))
      throw InvalidArgument("asym: linear-growth formulas need --alpha > 0");
  }
  if (o.oracle != "none" && o.oracle != "exact" && o.oracle != "grid")
    throw InvalidArgument("asym: --oracle must be none, exact or grid");
  if (o.oracle == "exact" && !has_exact_family(spec))
    throw InvalidArgument("asym: no exact oracle for family '" + spec.family() + "'");
  if (o.oracle == "grid" && !(o.h > 0)) throw InvalidArgument("asym: --h must be positive");

  Table table;
  table.columns = {"j", "t", "kappa", "a_j", "T_j"};
  for (Formula f : formulas) table.columns.push_back("log_" + to_string(f));
  if (o.oracle != "none") {
    table.columns.push_back("log_oracle");
    for (Formula f : formulas) table.columns.push_back("ratio_" + to_string(f));
  }
  table.columns.push_back("status");

  table.rows = parallel_rows<std::vector<Cell>>(schedule.size(), [&](std::size_t i) {
    const auto [j, t] = schedule[i];
    std::vector<Cell> row{j, t};
    try {
      const SaddleReport r = solve_kappa(spec, j, t);
      row.insert(row.end(), {r.kappa, r.a_j, r.T_j});
      std::vector<double> logs;
      for (Formula f : formulas) {
        AsymptoticEstimate e;
        switch (f) {
          case Formula::ThmA: e = thm_a(spec, j, t); break;
          case Formula::ThmB: e = thm_b(spec, j, t); break;
          default: {
            const double y = t - o.alpha * static_cast<double>(j);
            LinGrowthBranch b;
            if (f == Formula::CorLinGrowth_y_c_j23) b = {LinGrowthBranch::c_j23, o.c};
            e = cor_lin_growth(spec, o.alpha, [y](std::int64_t) { return y; }, j, b);
          }
        }
        logs.push_back(e.log_value);
        row.emplace_back(e.log_value);
      }
      if (o.oracle != "none") {
        const double lo = o.oracle == "exact" ? log_or_nan(*exact_family(spec, j, t))
                                              : log_or_nan(grid_oracle(spec, j, t, o.h).estimate);
        row.emplace_back(lo);
        for (double l : logs) row.emplace_back(std::exp(l - lo));
      }
      row.emplace_back(std::string("ok"));
    } catch (const RatioOutOfRange&) {
      row.resize(table.columns.size() - 1);
      row.emplace_back(std::string("skipped:RatioOutOfRange"));
    }
    return row;
  });
  return table;
}

Table cmd_clt(const Options& o) {
  const MeasureSpec spec = spec_from_text_or_path(o.spec);
  const auto js = parse_j_list(o.j_list);
  if (js.empty()) throw InvalidArgument("clt: empty j list");
  Table table;
  table.columns = {"j", "t", "log_estimate", "limit", "gap"};
  table.rows = parallel_rows<std::vector<Cell>>(js.size(), [&](std::size_t i) {
    const CltResult r = cor_clt(spec, o.y, js[i]);
    const double est = std::exp(r.estimate.log_value);
    return std::vector<Cell>{js[i], r.t, r.estimate.log_value, r.limit, std::fabs(est - r.limit) / r.limit};
  });
  return table;
}

RenewalInput load_renewal_input(const std::string& text_or_path) {
  std::string text = text_or_path;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || text[first] != '{') {
    std::ifstream in(text_or_path);
    if (!in) throw InvalidSpec("cannot read renewal input '" + text_or_path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    text = os.str();
  }
  try {
    return renewal_input_from_json(nlohmann::json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidSpec(std::string("malformed renewal JSON: ") + e.what());
  }
}

Table cmd_renewal(const Options& o, std::ostream& err) {
  const RenewalInput in = load_renewal_input(o.input);
  const auto schedule = parse_schedule(o.schedule);
  if (schedule.empty()) throw InvalidArgument("renewal: empty schedule");
  if (o.oracle != "none" && o.oracle != "grid") throw InvalidArgument("renewal: --oracle must be none or grid");
  if (o.oracle == "grid" && !in.dist) throw InvalidArgument("renewal: grid oracle needs a 'dist' in the input");
  check_admissible(in);

  Table table;
  table.columns = {"j", "t", "log_estimate"};
  if (o.oracle == "grid") table.columns.insert(table.columns.end(), {"log_oracle", "ratio"});
  table.columns.push_back("warning");

  std::optional<ConvolutionTable> base;
  double t_max = 0.0;
  for (const auto& [j, t] : schedule) t_max = std::max(t_max, t);
  if (o.oracle == "grid") {
    const GridMeasure u = build_renewal_grid(*in.dist, o.h, t_max + o.h);
    base.emplace(convolve_power(u, 1, 0.0));
  }
  table.rows = parallel_rows<std::vector<Cell>>(schedule.size(), [&](std::size_t i) {
    const auto [j, t] = schedule[i];
    const AsymptoticEstimate e = renewal_asymptotic(in, j, t);
    std::vector<Cell> row{j, t, e.log_value};
    if (base) {
      const double lo = log_or_nan(convolve_power(base->base(), j, 0.0).value_at(t));
      row.insert(row.end(), {lo, std::exp(e.log_value - lo)});
    }
    row.emplace_back(e.warnings.empty() ? std::string() : e.warnings.front());
    return row;
  });
  for (const auto& row : table.rows)
    if (!std::get<std::string>(row.back()).empty()) err << "warning: " << std::get<std::string>(row.back()) << "\n";
  return table;
}

Table cmd_oracle(const Options& o) {
  const MeasureSpec spec = spec_from_text_or_path(o.spec);
  if (o.j < 1) throw InvalidArgument("oracle: --j must be >= 1");
  if (!(o.h > 0)) throw InvalidArgument("oracle: --h must be positive");
  if (!(o.x_max > 0)) throw InvalidArgument("oracle: --x-max must be positive");
  double kappa = o.tilt;
  if (kappa < 0) {
    try {
      kappa = solve_kappa(spec, o.j, o.x_max / 2).kappa;
    } catch (const RatioOutOfRange&) {
      kappa = 0.0;
    }
  }
  const ConvolutionTable tab = convolve_power(discretize(spec, o.h, o.x_max), o.j, kappa);
  Table table;
  table.columns = {"grid_x", "log_V_star_j"};
  const auto cum = tab.cumulative();
  for (std::size_t k = 0; k < cum.size(); ++k)
    if (!cum[k].is_zero()) table.rows.push_back({static_cast<double>(k) * o.h, cum[k].log_abs()});
  return table;
}

void validate_threads_env() {
  if (const char* env = std::getenv("CONVPOW_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) throw InvalidArgument("CONVPOW_THREADS must be a positive integer");
  }
}

}  // namespace

std::vector<std::int64_t> parse_j_list(const std::string& text) {
  std::vector<std::int64_t> out;
  if (text.empty()) return out;
  for (const auto& tok : split(text, ',')) {
    const auto dots = tok.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_int(tok));
      continue;
    }
    const std::int64_t lo = parse_int(tok.substr(0, dots));
    const std::string rest = tok.substr(dots + 2);
    const auto op = rest.find_first_of("*+");
    if (op == std::string::npos) throw InvalidArgument("j range '" + tok + "' needs *factor or +step");
    const std::int64_t hi = parse_int(rest.substr(0, op));
    const std::int64_t step = parse_int(rest.substr(op + 1));
    if (lo < 1 || hi < lo) throw InvalidArgument("bad j range '" + tok + "'");
    if (rest[op] == '*' ? step < 2 : step < 1) throw InvalidArgument("bad j range step in '" + tok + "'");
    for (std::int64_t j = lo; j <= hi; j = rest[op] == '*' ? j * step : j + step) out.push_back(j);
  }
  for (auto j : out)
    if (j < 1) throw InvalidArgument("j values must be >= 1");
  return out;
}

std::vector<std::pair<std::int64_t, double>> parse_schedule(const std::string& text) {
  std::vector<std::pair<std::int64_t, double>> out;
  if (text.empty()) return out;
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw InvalidArgument("schedule '" + text + "' must start with ratio:, power: or list:");
  const std::string kind = text.substr(0, colon);
  const std::string rest = text.substr(colon + 1);
  if (kind == "list") {
    if (rest.empty()) return out;
    for (const auto& tok : split(rest, ',')) {
      const auto at = tok.find('@');
      if (at == std::string::npos) throw InvalidArgument("list entries look like j@t, got '" + tok + "'");
      const std::int64_t j = parse_int(tok.substr(0, at));
      const double t = parse_double(tok.substr(at + 1), "t");
      if (j < 1 || !(t > 0)) throw InvalidArgument("list entries need j >= 1 and t > 0");
      out.emplace_back(j, t);
    }
    return out;
  }
  const auto colon2 = rest.find(':');
  if (colon2 == std::string::npos) throw InvalidArgument("schedule '" + text + "' needs <param>:<j-list>");
  const double p = parse_double(rest.substr(0, colon2), "schedule parameter");
  const auto js = parse_j_list(rest.substr(colon2 + 1));
  if (kind == "ratio") {
    if (!(p > 0)) throw InvalidArgument("ratio schedule needs c > 0");
    for (auto j : js) out.emplace_back(j, p * static_cast<double>(j));
  } else if (kind == "power") {
    for (auto j : js) out.emplace_back(j, std::pow(static_cast<double>(j), p));
  } else {
    throw InvalidArgument("unknown schedule kind '" + kind + "'");
  }
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Saddle-point asymptotics of convolution powers", "convpow"};
  app.set_help_flag("--help", "print help");  // -h would clash with the grid step --h
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool spec) {
    if (spec) sub->add_option("--spec", o.spec, "measure spec: inline JSON or path")->required();
    sub->add_option("--out", o.out, "output file (default stdout)");
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };

  auto* asym = app.add_subcommand("asym", "asymptotic estimates over a (j, t) schedule");
  add_common(asym, true);
  asym->add_option("--schedule", o.schedule, "ratio:c:J | power:q:J | list:j@t,...")->required();
  asym->add_option("--formula", o.formula, "comma list of ThmA, ThmB, CorLinGrowth_small_y, CorLinGrowth_y_c_j23, auto");
  asym->add_option("--oracle", o.oracle, "none, exact or grid");
  asym->add_option("--h", o.h, "grid step for --oracle grid");
  asym->add_option("--alpha", o.alpha, "slope for the linear-growth formulas");
  asym->add_option("--c", o.c, "constant of the c j^(2/3) branch");

  auto* check = app.add_subcommand("check", "condition diagnostics at one (j, t)");
  add_common(check, true);
  check->add_option("--j", o.j)->required();
  check->add_option("--t", o.t)->required();
  check->add_option("--gamma", o.gamma, "lower end of the frequency scan");
  check->add_option("--z-max-factor", o.z_max_factor);
  check->add_option("--points", o.points);
  check->add_option("--tj-threshold", o.tj_threshold);
  check->add_option("--sup-threshold", o.sup_threshold);

  auto* clt = app.add_subcommand("clt", "critical-tilt limit along t(j, y)");
  add_common(clt, true);
  clt->add_option("--y", o.y);
  clt->add_option("--j", o.j_list, "j list, e.g. 10000,100000 or 10..1000000*10")->required();

  auto* renewal = app.add_subcommand("renewal", "renewal-function convolution powers from moments");
  add_common(renewal, false);
  renewal->add_option("--input", o.input, "{\"moments\": [...], \"dist\": spec}: inline JSON or path")->required();
  renewal->add_option("--schedule", o.schedule)->required();
  renewal->add_option("--oracle", o.oracle, "none or grid");
  renewal->add_option("--h", o.h);

  auto* oracle = app.add_subcommand("oracle", "grid table of V^{*j}");
  add_common(oracle, true);
  oracle->add_option("--j", o.j)->required();
  oracle->add_option("--h", o.h);
  oracle->add_option("--x-max", o.x_max)->required();
  oracle->add_option("--tilt", o.tilt, "tilt (default: saddle point at x_max/2)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfig;
  }

  try {
    validate_threads_env();
    if (check->parsed()) {
      const MeasureSpec spec = spec_from_text_or_path(o.spec);
      const ConditionReport r = check_conditions(spec, o.j, o.t, o.gamma, {o.z_max_factor, o.points},
                                                 {o.tj_threshold, o.sup_threshold});
      nlohmann::json j = to_json(r);
      j["command"] = "check";
      std::string text;
      if (o.format == "csv") {
        Table t;
        for (const auto& [k, v] : j.items()) {
          t.columns.push_back(k);
        }
        std::vector<Cell> row;
        for (const auto& [k, v] : j.items()) {
          if (v.is_number_float()) row.emplace_back(v.get<double>());
          else if (v.is_number_integer()) row.emplace_back(v.get<std::int64_t>());
          else if (v.is_boolean()) row.emplace_back(std::string(v.get<bool>() ? "true" : "false"));
          else row.emplace_back(v.get<std::string>());
        }
        t.rows.push_back(row);
        text = render(t, "check", "csv");
      } else {
        text = dump_fixed(j) + "\n";
      }
      emit(text, o.out, out);
      return r.regime == Regime::suspect ? kSuspect : kOk;
    }
    Table t;
    std::string name;
    if (asym->parsed()) {
      t = cmd_asym(o);
      name = "asym";
    } else if (clt->parsed()) {
      t = cmd_clt(o);
      name = "clt";
    } else if (renewal->parsed()) {
      t = cmd_renewal(o, err);
      name = "renewal";
    } else {
      t = cmd_oracle(o);
      name = "oracle";
    }
    emit(render(t, name, o.format), o.out, out);
    return kOk;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIo;
  } catch (const InvalidSpec& e) {
    err << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const MissingMoment& e) {
    err << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const InadmissibleMoments& e) {
    err << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const NotProbability& e) {
    err << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kMathDomain;
  }
}

}  // namespace convpow::cli
