#include "qs1d/potential.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qs1d {

namespace {

void check_imaginary_signs(const std::vector<Segment>& segments, bool allow_mixed) {
  bool has_neg = false;
  bool has_pos = false;
  for (const auto& s : segments) {
    if (s.value.imag() < 0.0) has_neg = true;
    if (s.value.imag() > 0.0) has_pos = true;
  }
  if (has_neg && has_pos && !allow_mixed) {
    throw MixedImaginarySigns(
        "profile mixes absorbing (Im<0) and emitting (Im>0) segments; "
        "construct with the dephasing-pair flag if intended");
  }
}

}  // namespace

Complex PotentialProfile::value_at(double y) const {
  if (y < domain_lo()) return Complex(v_left_, 0.0);
  if (y >= domain_hi()) return Complex(v_right_, 0.0);
  // segments are sorted and contiguous; find the covering one
  auto it = std::upper_bound(segments_.begin(), segments_.end(), y,
                             [](double v, const Segment& s) { return v < s.y_hi; });
  return it->value;
}

PotentialProfile make_profile(std::vector<Segment> segments, double v_left,
                              double v_right, bool allow_mixed_imaginary) {
  if (segments.empty()) {
    segments.push_back({0.0, PotentialProfile::kDefaultDomainLength, Complex(0.0)});
  }
  std::sort(segments.begin(), segments.end(),
            [](const Segment& a, const Segment& b) { return a.y_lo < b.y_lo; });
  for (const auto& s : segments) {
    if (!(s.y_lo < s.y_hi)) {
      throw EmptyProfile("segment with y_start >= y_end");
    }
  }
  for (std::size_t i = 1; i < segments.size(); ++i) {
    const double prev_hi = segments[i - 1].y_hi;
    const double lo = segments[i].y_lo;
    if (lo < prev_hi) {
      throw OverlappingSegments("segments overlap near y = " + std::to_string(lo));
    }
    if (lo > prev_hi) {
      throw NonContiguousSegments("gap [" + std::to_string(prev_hi) + ", " +
                                  std::to_string(lo) +
                                  "] must be given explicitly as value 0");
    }
  }
  check_imaginary_signs(segments, allow_mixed_imaginary);

  PotentialProfile p;
  p.segments_ = std::move(segments);
  p.v_left_ = v_left;
  p.v_right_ = v_right;
  p.allow_mixed_imag_ = allow_mixed_imaginary;
  p.max_abs_re_ = std::max(std::abs(v_left), std::abs(v_right));
  for (const auto& s : p.segments_) {
    p.max_abs_re_ = std::max(p.max_abs_re_, std::abs(s.value.real()));
  }
  return p;
}

PotentialProfile perturb(const PotentialProfile& profile, const Window& window,
                         Complex delta) {
  if (!(window.y_lo < window.y_hi)) {
    throw WindowOutOfDomain("window has non-positive width");
  }
  if (!profile.contains(window)) {
    throw WindowOutOfDomain("window [" + std::to_string(window.y_lo) + ", " +
                            std::to_string(window.y_hi) + "] outside profile domain");
  }

  std::vector<Segment> out;
  out.reserve(profile.segments().size() + 2);
  for (const auto& s : profile.segments()) {
    const double lo = std::max(s.y_lo, window.y_lo);
    const double hi = std::min(s.y_hi, window.y_hi);
    if (lo >= hi) {  // no overlap with the window
      out.push_back(s);
      continue;
    }
    if (s.y_lo < lo) out.push_back({s.y_lo, lo, s.value});
    out.push_back({lo, hi, s.value + delta});
    if (hi < s.y_hi) out.push_back({hi, s.y_hi, s.value});
  }

  PotentialProfile p;
  p.segments_ = std::move(out);
  p.v_left_ = profile.v_left();
  p.v_right_ = profile.v_right();
  p.allow_mixed_imag_ = profile.allows_mixed_imaginary();
  check_imaginary_signs(p.segments_, p.allow_mixed_imag_);
  p.max_abs_re_ = std::max(std::abs(p.v_left_), std::abs(p.v_right_));
  for (const auto& s : p.segments_) {
    p.max_abs_re_ = std::max(p.max_abs_re_, std::abs(s.value.real()));
  }
  return p;
}

PotentialProfile parse_profile_text(std::istream& in) {
  std::vector<Segment> segments;
  double v_left = 0.0;
  double v_right = 0.0;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;  // blank line
    if (first == "#vleft" || first == "#vright") {
      double v;
      if (!(ls >> v)) {
        throw ParseError("profile line " + std::to_string(line_no) +
                         ": expected a value after " + first);
      }
      (first == "#vleft" ? v_left : v_right) = v;
      continue;
    }
    if (first.front() == '#') continue;  // comment
    double lo, hi, re, im;
    std::istringstream again(line);
    if (!(again >> lo >> hi >> re >> im)) {
      throw ParseError("profile line " + std::to_string(line_no) +
                       ": expected 'y_start y_end re(V) im(V)'");
    }
    segments.push_back({lo, hi, Complex(re, im)});
  }
  return make_profile(std::move(segments), v_left, v_right,
                      /*allow_mixed_imaginary=*/true);
}

PotentialProfile parse_profile_text(const std::string& text) {
  std::istringstream in(text);
  return parse_profile_text(in);
}

PotentialProfile load_profile_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open profile file: " + path);
  return parse_profile_text(in);
}

std::string format_profile_text(const PotentialProfile& profile) {
  std::ostringstream out;
  char buf[128];
  std::snprintf(buf, sizeof buf, "#vleft %.17g\n#vright %.17g\n", profile.v_left(),
                profile.v_right());
  out << buf;
  for (const auto& s : profile.segments()) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g\n", s.y_lo, s.y_hi,
                  s.value.real(), s.value.imag());
    out << buf;
  }
  return out.str();
}

}  // namespace qs1d
