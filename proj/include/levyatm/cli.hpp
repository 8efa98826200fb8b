#ifndef LEVYATM_CLI_HPP
#define LEVYATM_CLI_HPP

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "levyatm/asymptotics.hpp"
#include "levyatm/calibration.hpp"
#include "levyatm/model.hpp"
#include "levyatm/pricing.hpp"

namespace levyatm::cli {

inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

/// `start:stop:count`, log-spaced.
inline std::vector<double> parse_t_grid(const std::string& text) {
  double start = 0, stop = 0;
  long count = 0;
  char sep1 = 0, sep2 = 0;
  std::istringstream in(text);
  if (!(in >> start >> sep1 >> stop >> sep2 >> count) || sep1 != ':' || sep2 != ':' ||
      !in.eof())
    throw CLI::ValidationError("--t-grid", "expected start:stop:count, got '" + text + "'");
  if (!(start > 0.0) || !(stop > 0.0) || count < 1 || (count > 1 && stop <= start))
    throw CLI::ValidationError("--t-grid", "need 0 < start < stop and count >= 1");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(count));
  if (count == 1) {
    grid.push_back(start);
    return grid;
  }
  const double la = std::log(start), lb = std::log(stop);
  for (long i = 0; i < count; ++i)
    grid.push_back(std::exp(la + (lb - la) * static_cast<double>(i) /
                                     static_cast<double>(count - 1)));
  grid.front() = start;
  grid.back() = stop;
  return grid;
}

namespace detail {

struct ModelFlags {
  double c = 0.5, g = 2.0, m = 3.6, y = 1.5, sigma = 0.0;

  void attach(CLI::App& app) {
    app.add_option("--C", c, "positive jump intensity C")->check(CLI::PositiveNumber);
    app.add_option("--G", g, "left tempering rate G")->check(CLI::PositiveNumber);
    app.add_option("--M", m, "right tempering rate M (> 1)");
    app.add_option("--Y", y, "activity index Y in (1,2)");
    app.add_option("--sigma", sigma, "diffusion volatility (0 = pure jump)")
        ->check(CLI::NonNegativeNumber);
  }

  CgmyParams params() const { return CgmyParams(c, g, m, y, sigma); }
};

inline PriceExpansion expansion_for(const CgmyParams& p) {
  return p.pure_jump() ? pure_jump_coeffs(p) : mixed_coeffs(p);
}

struct PricedCell {
  double price = 0.0;
  std::optional<double> std_error;
};

inline PricedCell price_one(const CgmyParams& p, double s0, double t, const std::string& method,
                            const McConfig& mc, const IftConfig& ift) {
  PricedCell cell;
  if (method == "order1") {
    cell.price = price_expansion_eval_order1(expansion_for(p), t, s0);
  } else if (method == "order2") {
    cell.price = price_expansion_eval(expansion_for(p), t, s0);
  } else if (method == "ift") {
    cell.price = price_ift(p, t, ift, s0).price;
  } else if (method == "mc") {
    const McResult r = price_mc(p, t, mc, s0);
    cell.price = r.price;
    cell.std_error = r.std_error;
  } else {
    throw CLI::ValidationError("--method", "unknown method '" + method + "'");
  }
  return cell;
}

inline std::ostream& open_sink(const std::string& out_path, std::ofstream& file) {
  if (out_path.empty()) return std::cout;
  file.open(out_path);
  if (!file) throw std::runtime_error("cannot open output file: " + out_path);
  return file;
}

}  // namespace detail

inline int run_command(std::vector<std::string> args) {
  CLI::App app{"ATM option pricing under tempered-stable Levy models"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file mirroring the flags (flags win)");

  detail::ModelFlags model;
  std::string out_path;
  double s0 = 1.0;
  app.add_option("--out", out_path, "write CSV here instead of stdout");
  app.add_option("--s0", s0, "spot price")->check(CLI::PositiveNumber);
  model.attach(app);

  // price / ivol shared knobs
  double t_single = 0.01;
  std::string method = "order2";
  std::string t_grid_text;
  unsigned long n_paths = 100000;
  unsigned long long seed = 1;
  bool antithetic = false;

  CLI::App* cmd_coeffs = app.add_subcommand("coeffs", "expansion coefficient table");

  CLI::App* cmd_price = app.add_subcommand("price", "single ATM call price");
  cmd_price->add_option("--t", t_single, "maturity")->check(CLI::PositiveNumber);
  cmd_price->add_option("--method", method, "order1|order2|ift|mc");
  cmd_price->add_option("--n", n_paths, "MC paths")->check(CLI::PositiveNumber);
  cmd_price->add_option("--seed", seed, "MC seed");
  cmd_price->add_flag("--antithetic", antithetic, "antithetic gaussian draws (MC)");

  CLI::App* cmd_ivol = app.add_subcommand("ivol", "implied-vol curve over a t-grid");
  cmd_ivol->add_option("--t", t_single, "single maturity")->check(CLI::PositiveNumber);
  cmd_ivol->add_option("--t-grid", t_grid_text, "start:stop:count (log-spaced)");
  cmd_ivol->add_option("--method", method, "order1|order2|ift|mc");
  cmd_ivol->add_option("--n", n_paths, "MC paths")->check(CLI::PositiveNumber);
  cmd_ivol->add_option("--seed", seed, "MC seed");

  std::string axis, values_text, methods_text = "order1,order2";
  CLI::App* cmd_sweep = app.add_subcommand("sweep", "price comparison sweep");
  cmd_sweep->add_option("--axis", axis, "C|G|M|Y|sigma");
  cmd_sweep->add_option("--values", values_text, "comma-separated axis values");
  cmd_sweep->add_option("--t-grid", t_grid_text, "start:stop:count (log-spaced)")->required();
  cmd_sweep->add_option("--methods", methods_text, "subset of mc,ift,order1,order2");
  cmd_sweep->add_option("--n", n_paths, "MC paths")->check(CLI::PositiveNumber);
  cmd_sweep->add_option("--seed", seed, "MC seed");

  std::string quotes_path;
  double guess_c = 0.5, guess_y = 1.5;
  CLI::App* cmd_cal = app.add_subcommand("calibrate", "fit (C+, C-, Y) to an IV surface");
  cmd_cal->add_option("--quotes", quotes_path, "CSV: date,maturity,log_moneyness,implied_vol,weight")
      ->required();
  cmd_cal->add_option("--guess-c", guess_c, "initial C+ and C-")->check(CLI::PositiveNumber);
  cmd_cal->add_option("--guess-y", guess_y, "initial Y");

  // model/output flags are valid after the subcommand name too
  for (CLI::App* sub : {cmd_coeffs, cmd_price, cmd_ivol, cmd_sweep, cmd_cal}) sub->fallthrough();

  // CLI11 consumes argv back-to-front
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    std::ofstream file;
    std::ostream& out = detail::open_sink(out_path, file);
    const CgmyParams params = model.params();

    if (*cmd_coeffs) {
      const PriceExpansion pe = detail::expansion_for(params);
      const IvExpansion ive = iv_expansion(params);
      out << "quantity,value\n";
      out << "regime," << (pe.regime == Regime::pure_jump ? "pure_jump" : "mixed") << "\n";
      out << "d1," << fmt(pe.d1) << "\n";
      out << "d1_exponent," << fmt(pe.exp1) << "\n";
      out << "d2," << fmt(pe.d2) << "\n";
      out << "d2_exponent," << fmt(pe.exp2) << "\n";
      out << "s1," << fmt(ive.s1) << "\n";
      out << "s1_exponent," << fmt(ive.exp1) << "\n";
      out << "s2," << fmt(ive.s2) << "\n";
      out << "s2_exponent," << fmt(ive.exp2) << "\n";
      return 0;
    }

    McConfig mc;
    mc.n_paths = n_paths;
    mc.seed = seed;
    mc.antithetic = antithetic;
    const IftConfig ift;

    if (*cmd_price) {
      const auto cell = detail::price_one(params, s0, t_single, method, mc, ift);
      out << "method,t,price,std_error\n";
      out << method << "," << fmt(t_single) << "," << fmt(cell.price) << ",";
      if (cell.std_error) out << fmt(*cell.std_error);
      out << "\n";
      return 0;
    }

    if (*cmd_ivol) {
      const std::vector<double> grid =
          t_grid_text.empty() ? std::vector<double>{t_single} : parse_t_grid(t_grid_text);
      out << "t,method,implied_vol\n";
      int rc = 0;
      for (double t : grid) {
        double iv;
        try {
          if (method == "order1" || method == "order2") {
            const IvExpansion ive = iv_expansion(params);
            iv = method == "order1" ? ive.s1 * std::pow(t, ive.exp1) : iv_expansion_eval(ive, t);
          } else {
            const auto cell = detail::price_one(params, 1.0, t, method, mc, ift);
            iv = implied_vol(cell.price, 1.0, 1.0, t);
          }
        } catch (const accuracy_error&) {
          out << fmt(t) << "," << method << ",error\n";
          rc = 3;
          continue;
        } catch (const std::domain_error&) {
          out << fmt(t) << "," << method << ",error\n";
          rc = 3;
          continue;
        }
        out << fmt(t) << "," << method << "," << fmt(iv) << "\n";
      }
      return rc;
    }

    if (*cmd_sweep) {
      std::vector<double> axis_values;
      if (!axis.empty()) {
        if (values_text.empty())
          throw CLI::ValidationError("--values", "required when --axis is given");
        std::stringstream vs(values_text);
        std::string cell;
        while (std::getline(vs, cell, ',')) axis_values.push_back(std::stod(cell));
        if (axis_values.empty())
          throw CLI::ValidationError("--values", "need at least one value");
        std::sort(axis_values.begin(), axis_values.end());
      } else {
        axis_values.push_back(std::numeric_limits<double>::quiet_NaN());  // placeholder
      }
      std::vector<std::string> methods;
      {
        std::stringstream ms(methods_text);
        std::string cell;
        while (std::getline(ms, cell, ',')) methods.push_back(cell);
        if (methods.empty()) throw CLI::ValidationError("--methods", "need at least one method");
        std::sort(methods.begin(), methods.end());
        for (const auto& m : methods)
          if (m != "mc" && m != "ift" && m != "order1" && m != "order2")
            throw CLI::ValidationError("--methods", "unknown method '" + m + "'");
      }
      const std::vector<double> grid = parse_t_grid(t_grid_text);

      out << "axis_value,t,method,price,std_error\n";
      int rc = 0;
      for (double v : axis_values) {
        CgmyParams p = params;
        if (!axis.empty()) {
          double c = model.c, g = model.g, mm = model.m, y = model.y, sig = model.sigma;
          if (axis == "C")
            c = v;
          else if (axis == "G")
            g = v;
          else if (axis == "M")
            mm = v;
          else if (axis == "Y")
            y = v;
          else if (axis == "sigma")
            sig = v;
          else
            throw CLI::ValidationError("--axis", "unknown axis '" + axis + "'");
          p = CgmyParams(c, g, mm, y, sig);
        }
        for (double t : grid) {
          for (const auto& m : methods) {
            const std::string axis_cell = axis.empty() ? "" : fmt(v);
            try {
              const auto cell = detail::price_one(p, s0, t, m, mc, ift);
              out << axis_cell << "," << fmt(t) << "," << m << "," << fmt(cell.price) << ",";
              if (cell.std_error) out << fmt(*cell.std_error);
              out << "\n";
            } catch (const accuracy_error&) {
              out << axis_cell << "," << fmt(t) << "," << m << ",error,\n";
              rc = 3;
            } catch (const numeric_error&) {
              out << axis_cell << "," << fmt(t) << "," << m << ",error,\n";
              rc = 3;
            }
          }
        }
      }
      return rc;
    }

    if (*cmd_cal) {
      const auto quotes = read_quotes_csv_file(quotes_path);
      const CalibrationResult r =
          calibrate(quotes, CalibrationBounds{}, {guess_c, guess_c, guess_y});
      out << "parameter,value\n";
      out << "c_plus," << fmt(r.c_plus) << "\n";
      out << "c_minus," << fmt(r.c_minus) << "\n";
      out << "Y," << fmt(r.y) << "\n";
      out << "objective," << fmt(r.objective) << "\n";
      out << "converged," << (r.converged ? 1 : 0) << "\n";
      for (std::size_t i = 0; i < r.dates.size(); ++i)
        out << "sigma0[" << r.dates[i] << "]," << fmt(r.spot_vols[i]) << "\n";
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

inline int run_command(int argc, char** argv) {
  return run_command(std::vector<std::string>(argv + 1, argv + argc));
}

}  // namespace levyatm::cli

#endif  // LEVYATM_CLI_HPP
