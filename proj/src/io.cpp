#include "ltlab/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "ltlab/error.hpp"
#include "ltlab/format.hpp"

namespace ltlab {

namespace {

std::string non_finite(double x) {
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

const char* const kSpectrumHeader =
    "j,parity,re_mu,im_mu,re_lambda,im_lambda,residual,seed_deviation";

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = line.find(',');
    out.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return out;
}

double parse_double(std::string_view s, long line_no) {
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError("spectrum csv line " + std::to_string(line_no) + ": bad number '" +
                     std::string(s) + "'");
  }
  return value;
}

}  // namespace

std::string format_shortest(double x) {
  if (!std::isfinite(x)) return non_finite(x);
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

std::string format_g17(double x) {
  if (!std::isfinite(x)) return non_finite(x);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_spectrum_csv(std::ostream& out, const std::vector<Eigenvalue>& eigs) {
  out << kSpectrumHeader << '\n';
  for (const Eigenvalue& e : eigs) {
    out << e.j << ',' << to_string(e.parity) << ',' << format_g17(e.mu.real()) << ','
        << format_g17(e.mu.imag()) << ',' << format_g17(e.lambda.real()) << ','
        << format_g17(e.lambda.imag()) << ',' << format_g17(e.residual) << ','
        << format_g17(e.seed_deviation) << '\n';
  }
}

std::vector<Eigenvalue> read_spectrum_csv(std::istream& in) {
  std::vector<Eigenvalue> out;
  std::string line;
  long line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kSpectrumHeader) {
        throw ParseError("spectrum csv: unexpected header '" + line + "'");
      }
      header_seen = true;
      continue;
    }
    const auto cells = split(line);
    if (cells.size() != 8) {
      throw ParseError("spectrum csv line " + std::to_string(line_no) + ": expected 8 fields");
    }
    Eigenvalue e;
    const auto [ptr, ec] =
        std::from_chars(cells[0].data(), cells[0].data() + cells[0].size(), e.j);
    if (cells[0].empty() || ec != std::errc() || ptr != cells[0].data() + cells[0].size()) {
      throw ParseError("spectrum csv line " + std::to_string(line_no) + ": bad index");
    }
    if (cells[1] == "even") {
      e.parity = Parity::even;
    } else if (cells[1] == "odd") {
      e.parity = Parity::odd;
    } else {
      throw ParseError("spectrum csv line " + std::to_string(line_no) + ": bad parity");
    }
    e.mu = cplx(parse_double(cells[2], line_no), parse_double(cells[3], line_no));
    e.lambda = cplx(parse_double(cells[4], line_no), parse_double(cells[5], line_no));
    e.residual = parse_double(cells[6], line_no);
    e.seed_deviation = parse_double(cells[7], line_no);
    out.push_back(e);
  }
  return out;
}

void write_segments_csv(std::ostream& out, const PiecewiseLogLinear& pll) {
  out << "seg_index,a,b,kind,anchor,anchor_value,rate\n";
  for (std::size_t i = 0; i < pll.segments.size(); ++i) {
    const Segment& s = pll.segments[i];
    out << i << ',' << format_g17(s.a) << ',' << format_g17(s.b) << ',';
    if (s.kind == Segment::Kind::exponential) {
      out << "exponential," << format_g17(s.anchor) << ',' << format_g17(s.anchor_value) << ','
          << format_g17(s.rate) << '\n';
    } else {
      out << "original,,,\n";
    }
  }
}

}  // namespace ltlab
