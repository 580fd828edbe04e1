#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dlp {

struct arith_overflow : std::runtime_error {
    arith_overflow() : std::runtime_error("integer overflow in exact arithmetic") {}
};

struct non_integral_division : std::runtime_error {
    non_integral_division() : std::runtime_error("division does not divide evenly") {}
};

int64_t checked_add(int64_t a, int64_t b);
int64_t checked_sub(int64_t a, int64_t b);
int64_t checked_mul(int64_t a, int64_t b);

// Exact rational with reduced form, den > 0.
class rational {
public:
    rational() : m_num(0), m_den(1) {}
    rational(int64_t n) : m_num(n), m_den(1) {}
    rational(int64_t n, int64_t d);

    int64_t num() const { return m_num; }
    int64_t den() const { return m_den; }

    bool is_zero() const { return m_num == 0; }
    bool is_integer() const { return m_den == 1; }
    bool is_neg() const { return m_num < 0; }

    // Throws non_integral_division unless den == 1.
    int64_t to_int() const;

    rational operator-() const;
    rational operator+(const rational& o) const;
    rational operator-(const rational& o) const;
    rational operator*(const rational& o) const;
    rational operator/(const rational& o) const;

    bool operator==(const rational& o) const { return m_num == o.m_num && m_den == o.m_den; }
    bool operator!=(const rational& o) const { return !(*this == o); }
    bool operator<(const rational& o) const;
    bool operator<=(const rational& o) const { return *this < o || *this == o; }
    bool operator>(const rational& o) const { return o < *this; }
    bool operator>=(const rational& o) const { return o <= *this; }

    std::string to_string() const;

private:
    int64_t m_num;
    int64_t m_den;
    void reduce();
};

} // namespace dlp
