// Shared error types and small numeric helpers.
#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace tscond {

// Bad user input: geometry, config files, parameter ranges.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// An iterative solve that ran out of iterations. Carries the residual history
// so failure reports can show how the iteration behaved.
struct convergence_error : std::runtime_error {
    std::vector<double> history;
    convergence_error(const std::string& what, std::vector<double> hist)
        : std::runtime_error(what), history(std::move(hist)) {}
};

// Linear-algebra level failure (singular matrix, factorization breakdown).
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 v) { return std::hypot(v.x, v.y); }

inline void ensure(bool cond, const std::string& msg) {
    if (!cond) throw config_error(msg);
}

}  // namespace tscond
