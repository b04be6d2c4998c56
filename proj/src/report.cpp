#include "polyweight/report.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "polyweight/errors.hpp"

namespace polyweight::report {

std::string format_value(const CsvValue& v) {
  if (std::holds_alternative<long long>(v)) return std::to_string(std::get<long long>(v));
  if (std::holds_alternative<bool>(v)) return std::get<bool>(v) ? "true" : "false";
  if (std::holds_alternative<std::string>(v)) return std::get<std::string>(v);
  double d = std::get<double>(v);
  if (std::isnan(d)) return "nan";
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), d);
  return std::string(buf, res.ptr);
}

std::string csv_to_string(const std::vector<std::string>& header,
                          const std::vector<std::vector<CsvValue>>& rows) {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i)
    os << header[i] << (i + 1 < header.size() ? "," : "");
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << format_value(row[i]) << (i + 1 < row.size() ? "," : "");
    os << "\n";
  }
  return os.str();
}

void emit_csv(const std::string& path, const std::vector<std::string>& header,
              const std::vector<std::vector<CsvValue>>& rows) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("emit_csv: cannot open " + path);
  f << csv_to_string(header, rows);
}

namespace {

std::string fmt(double d) { return format_value(CsvValue(d)); }

}  // namespace

std::string plot_to_string(const std::vector<double>& x, const std::vector<double>& y,
                           const std::string& x_label, const std::string& y_label) {
  const int w = 640, h = 480, ml = 70, mr = 20, mt = 20, mb = 50;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\""
     << h << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
  os << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr
     << "\" y2=\"" << h - mb << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
     << h - mb << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 12
     << "\" text-anchor=\"middle\" font-size=\"13\">" << x_label << "</text>\n";
  os << "<text x=\"16\" y=\"" << (mt + h - mb) / 2
     << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 16 "
     << (mt + h - mb) / 2 << ")\">" << y_label << "</text>\n";

  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i)
    if (std::isfinite(x[i]) && std::isfinite(y[i])) pts.emplace_back(x[i], y[i]);

  if (!pts.empty()) {
    double xmin = pts[0].first, xmax = pts[0].first;
    double ymin = pts[0].second, ymax = pts[0].second;
    for (auto [a, b] : pts) {
      xmin = std::min(xmin, a);
      xmax = std::max(xmax, a);
      ymin = std::min(ymin, b);
      ymax = std::max(ymax, b);
    }
    if (xmax == xmin) {
      xmin -= 1;
      xmax += 1;
    }
    if (ymax == ymin) {
      ymin -= 1;
      ymax += 1;
    }
    auto sx = [&](double v) { return ml + (v - xmin) / (xmax - xmin) * (w - ml - mr); };
    auto sy = [&](double v) {
      return h - mb - (v - ymin) / (ymax - ymin) * (h - mt - mb);
    };
    os << "<text x=\"" << ml << "\" y=\"" << h - mb + 16
       << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(xmin) << "</text>\n";
    os << "<text x=\"" << w - mr << "\" y=\"" << h - mb + 16
       << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(xmax) << "</text>\n";
    os << "<text x=\"" << ml - 6 << "\" y=\"" << h - mb
       << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(ymin) << "</text>\n";
    os << "<text x=\"" << ml - 6 << "\" y=\"" << mt + 10
       << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(ymax) << "</text>\n";
    os << "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
      os << fmt(sx(pts[i].first)) << "," << fmt(sy(pts[i].second));
      if (i + 1 < pts.size()) os << " ";
    }
    os << "\"/>\n";
    for (auto [a, b] : pts)
      os << "<circle cx=\"" << fmt(sx(a)) << "\" cy=\"" << fmt(sy(b))
         << "\" r=\"2.5\" fill=\"#1f6fb2\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

void emit_plot(const std::string& path, const std::vector<double>& x,
               const std::vector<double>& y, const std::string& x_label,
               const std::string& y_label) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("emit_plot: cannot open " + path);
  f << plot_to_string(x, y, x_label, y_label);
}

std::string RunReport::to_json() const {
  nlohmann::json j;
  j["schema_version"] = schema_version;
  j["command"] = command;
  j["config"] = config_echo;
  j["columns"] = header;
  j["provenance"] = provenance;
  j["all_pass"] = all_pass;
  j["wall_seconds"] = wall_seconds;
  j["notes"] = notes;
  nlohmann::json rows_json = nlohmann::json::array();
  for (const auto& row : rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& v : row) {
      if (std::holds_alternative<long long>(v)) {
        r.push_back(std::get<long long>(v));
      } else if (std::holds_alternative<bool>(v)) {
        r.push_back(std::get<bool>(v));
      } else if (std::holds_alternative<std::string>(v)) {
        r.push_back(std::get<std::string>(v));
      } else {
        double d = std::get<double>(v);
        if (std::isfinite(d))
          r.push_back(d);
        else
          r.push_back(format_value(v));  // inf/nan as strings in JSON
      }
    }
    rows_json.push_back(std::move(r));
  }
  j["rows"] = std::move(rows_json);
  return j.dump(2) + "\n";
}

}  // namespace polyweight::report
