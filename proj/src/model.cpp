#include "gravplan/model.hpp"

#include <cmath>
#include <string>

namespace gravplan {

std::string plane_token(Plane p) { return p == Plane::XY ? "xy-axes" : "z-axis"; }

Plane plane_from_token(const std::string& token) {
  if (token == "xy-axes") return Plane::XY;
  if (token == "z-axis") return Plane::Z;
  throw std::invalid_argument("unknown plane '" + token + "'");
}

std::string link_name(LinkIndex id) { return "L" + std::to_string(id); }

ArticulatedObject::ArticulatedObject(std::vector<LinkSpec> links) : links_(std::move(links)) {
  if (links_.size() < 2) throw std::invalid_argument("articulated object needs at least 2 links");
  for (std::size_t k = 0; k < links_.size(); ++k) {
    const LinkSpec& l = links_[k];
    if (l.id != k + 1) throw std::invalid_argument("link ids must be 1..L in order");
    if (!(l.length > 0)) throw std::invalid_argument("link length must be positive");
    if (!(l.theta >= 0 && l.theta < 360) || !(l.gamma >= 0 && l.gamma < 360))
      throw std::invalid_argument("link angles must lie in [0, 360)");
  }
}

ArticulatedObject ArticulatedObject::chain(std::size_t count) {
  std::vector<LinkSpec> links;
  for (std::size_t k = 1; k <= count; ++k) links.push_back(LinkSpec{.id = k});
  return ArticulatedObject(std::move(links));
}

std::vector<std::pair<LinkIndex, LinkIndex>> ArticulatedObject::connected() const {
  std::vector<std::pair<LinkIndex, LinkIndex>> out;
  for (LinkIndex k = 1; k < links_.size(); ++k) out.emplace_back(k, k + 1);
  return out;
}

bool ArticulatedObject::adjacent(LinkIndex a, LinkIndex b) const {
  if (a < 1 || b < 1 || a > size() || b > size()) return false;
  return a + 1 == b || b + 1 == a;
}

Configuration ArticulatedObject::configuration() const {
  Configuration c;
  for (const auto& l : links_) c.angles.push_back({l.theta, l.gamma});
  return c;
}

namespace {

void check_index(const ArticulatedObject& obj, LinkIndex j) {
  if (j < 1 || j > obj.size())
    throw std::out_of_range("link index " + std::to_string(j) + " outside 1.." +
                            std::to_string(obj.size()));
}

}  // namespace

std::vector<LinkIndex> upstream(const ArticulatedObject& obj, LinkIndex j) {
  check_index(obj, j);
  std::vector<LinkIndex> out;
  for (LinkIndex k = 1; k < j; ++k) out.push_back(k);
  return out;
}

std::vector<LinkIndex> downstream(const ArticulatedObject& obj, LinkIndex j) {
  check_index(obj, j);
  std::vector<LinkIndex> out;
  for (LinkIndex k = j + 1; k <= obj.size(); ++k) out.push_back(k);
  return out;
}

std::vector<LinkIndex> affected_links(const ArticulatedObject& obj, LinkIndex hold,
                                      LinkIndex move) {
  check_index(obj, hold);
  check_index(obj, move);
  if (!obj.adjacent(hold, move))
    throw std::invalid_argument("links " + std::to_string(hold) + " and " + std::to_string(move) +
                                " are not adjacent");
  std::vector<LinkIndex> out;
  if (move > hold) {
    for (LinkIndex k = move; k <= obj.size(); ++k) out.push_back(k);
  } else {
    for (LinkIndex k = 1; k <= move; ++k) out.push_back(k);
  }
  return out;
}

double normalize_degrees(double a) {
  double r = std::fmod(a, 360.0);
  if (r < 0) r += 360.0;
  if (r >= 360.0) r = 0.0;  // fmod rounding on tiny negatives
  return r;
}

double angular_gap(double a, double b) {
  double d = std::fabs(normalize_degrees(a) - normalize_degrees(b));
  return std::min(d, 360.0 - d);
}

}  // namespace gravplan
