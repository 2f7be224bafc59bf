#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gravplan {

/// The two planes every link orientation is measured on.
enum class Plane { XY, Z };

inline constexpr Plane kPlanes[] = {Plane::XY, Plane::Z};

/// PDDL constant naming the plane (`xy-axes` / `z-axis`).
std::string plane_token(Plane p);
/// Inverse of plane_token; throws std::invalid_argument on anything else.
Plane plane_from_token(const std::string& token);

/// 1-based ordinal link identifier.
using LinkIndex = std::size_t;

/// Textual link name, `L1..LN`.
std::string link_name(LinkIndex id);

struct LinkSpec {
  LinkIndex id = 1;
  double length = 15.0;  // cm, metadata only
  double theta = 0.0;    // degrees on XY
  double gamma = 0.0;    // degrees on Z
};

/// Orientation of one link on both planes, absolute robot-centred frame.
struct LinkAngles {
  double theta = 0.0;
  double gamma = 0.0;

  double on(Plane p) const { return p == Plane::XY ? theta : gamma; }
  bool operator==(const LinkAngles&) const = default;
};

struct Configuration {
  std::vector<LinkAngles> angles;

  std::size_t size() const { return angles.size(); }
  const LinkAngles& at(LinkIndex id) const { return angles.at(id - 1); }
  bool operator==(const Configuration&) const = default;
};

/// A serial chain of L >= 2 links; link k is jointed to k-1 and k+1.
class ArticulatedObject {
 public:
  explicit ArticulatedObject(std::vector<LinkSpec> links);
  /// Chain of `count` links with default length and zero angles.
  static ArticulatedObject chain(std::size_t count);

  std::size_t size() const { return links_.size(); }
  std::size_t joint_count() const { return links_.size() - 1; }
  const std::vector<LinkSpec>& links() const { return links_; }
  /// Ordered adjacent pairs (k, k+1).
  std::vector<std::pair<LinkIndex, LinkIndex>> connected() const;
  bool adjacent(LinkIndex a, LinkIndex b) const;
  Configuration configuration() const;

 private:
  std::vector<LinkSpec> links_;
};

struct RateParams {
  double speed_i = 10.0;  // deg/s, robot increase
  double speed_d = 10.0;  // deg/s, robot decrease
  double speed_g = 0.5;   // deg/s, UCM gravity
  double accel_g = 0.1;   // deg/s^2, UACM gravity
};

/// up(l_j): links 1..j-1.
std::vector<LinkIndex> upstream(const ArticulatedObject& obj, LinkIndex j);
/// down(l_j): links j+1..L.
std::vector<LinkIndex> downstream(const ArticulatedObject& obj, LinkIndex j);

/// Links that rotate rigidly when `move` is rotated while `hold` is gripped:
/// `move` plus everything on the far side of it from `hold`.
std::vector<LinkIndex> affected_links(const ArticulatedObject& obj, LinkIndex hold,
                                      LinkIndex move);

/// Normalizes any finite angle into [0, 360).
double normalize_degrees(double a);

/// Minimal separation of two angles on the circle, in [0, 180].
double angular_gap(double a, double b);

}  // namespace gravplan
