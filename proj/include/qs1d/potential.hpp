#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qs1d/errors.hpp"
#include "qs1d/types.hpp"

namespace qs1d {

/// One piece of a piecewise-constant potential, value on [y_lo, y_hi).
struct Segment {
  double y_lo;
  double y_hi;
  Complex value;
};

/// A position interval [y_lo, y_hi] used for local perturbations,
/// Zeeman windows, optical potentials and window-averaged densities.
struct Window {
  double y_lo;
  double y_hi;

  double width() const { return y_hi - y_lo; }
  double mid() const { return 0.5 * (y_lo + y_hi); }
};

/// Immutable piecewise-constant potential on a line.
///
/// Segments are contiguous and cover [domain_lo(), domain_hi()]; outside
/// that interval the potential equals v_left() / v_right().  A negative
/// imaginary part models an absorber, a positive one a carrier source;
/// mixing both signs in one profile requires the explicit dephasing-pair
/// flag.  Instances are immutable and safe to share across threads.
class PotentialProfile {
 public:
  static constexpr double kDefaultDomainLength = 2.0;

  double v_left() const { return v_left_; }
  double v_right() const { return v_right_; }
  const std::vector<Segment>& segments() const { return segments_; }
  bool allows_mixed_imaginary() const { return allow_mixed_imag_; }

  double domain_lo() const { return segments_.front().y_lo; }
  double domain_hi() const { return segments_.back().y_hi; }
  double domain_length() const { return domain_hi() - domain_lo(); }

  /// Potential value at y; the asymptotic level outside the domain.
  Complex value_at(double y) const;

  /// Largest |Re V| over the segments, cached at construction.
  double max_abs_re() const { return max_abs_re_; }

  bool contains(const Window& w) const {
    return w.y_lo >= domain_lo() && w.y_hi <= domain_hi();
  }

  friend PotentialProfile make_profile(std::vector<Segment> segments,
                                       double v_left, double v_right,
                                       bool allow_mixed_imaginary);
  friend PotentialProfile perturb(const PotentialProfile& profile,
                                  const Window& window, Complex delta);

 private:
  PotentialProfile() = default;

  std::vector<Segment> segments_;
  double v_left_ = 0.0;
  double v_right_ = 0.0;
  double max_abs_re_ = 0.0;
  bool allow_mixed_imag_ = false;
};

/// Validates and freezes a profile.  An empty segment list yields a flat
/// zero potential on [0, kDefaultDomainLength].  Gaps between segments are
/// rejected (give the gap explicitly with value 0), as are overlapping or
/// zero-width segments.
PotentialProfile make_profile(std::vector<Segment> segments, double v_left = 0.0,
                              double v_right = 0.0,
                              bool allow_mixed_imaginary = false);

/// Returns a new profile equal to `profile` plus `delta` on `window`,
/// splitting segment boundaries as needed.  The input is untouched.
PotentialProfile perturb(const PotentialProfile& profile, const Window& window,
                         Complex delta);

/// Text format, one segment per line "y_lo y_hi re(V) im(V)" with optional
/// header lines "#vleft <x>" and "#vright <x>"; other '#' lines are comments.
PotentialProfile parse_profile_text(std::istream& in);
PotentialProfile parse_profile_text(const std::string& text);
PotentialProfile load_profile_file(const std::string& path);
std::string format_profile_text(const PotentialProfile& profile);

}  // namespace qs1d
