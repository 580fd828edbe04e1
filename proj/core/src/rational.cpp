#include "dlp/rational.hpp"

#include <numeric>

namespace dlp {

int64_t checked_add(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw arith_overflow();
    return r;
}

int64_t checked_sub(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_sub_overflow(a, b, &r)) throw arith_overflow();
    return r;
}

int64_t checked_mul(int64_t a, int64_t b) {
    int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw arith_overflow();
    return r;
}

rational::rational(int64_t n, int64_t d) : m_num(n), m_den(d) {
    if (d == 0) throw std::invalid_argument("zero denominator");
    reduce();
}

void rational::reduce() {
    if (m_den < 0) {
        m_num = checked_sub(0, m_num);
        m_den = checked_sub(0, m_den);
    }
    int64_t g = std::gcd(m_num < 0 ? -m_num : m_num, m_den);
    if (g > 1) {
        m_num /= g;
        m_den /= g;
    }
    if (m_num == 0) m_den = 1;
}

int64_t rational::to_int() const {
    if (m_den != 1) throw non_integral_division();
    return m_num;
}

rational rational::operator-() const {
    return rational(checked_sub(0, m_num), m_den);
}

rational rational::operator+(const rational& o) const {
    return rational(checked_add(checked_mul(m_num, o.m_den), checked_mul(o.m_num, m_den)),
                    checked_mul(m_den, o.m_den));
}

rational rational::operator-(const rational& o) const {
    return *this + (-o);
}

rational rational::operator*(const rational& o) const {
    return rational(checked_mul(m_num, o.m_num), checked_mul(m_den, o.m_den));
}

rational rational::operator/(const rational& o) const {
    if (o.is_zero()) throw std::invalid_argument("division by zero");
    return rational(checked_mul(m_num, o.m_den), checked_mul(m_den, o.m_num));
}

bool rational::operator<(const rational& o) const {
    return checked_mul(m_num, o.m_den) < checked_mul(o.m_num, m_den);
}

std::string rational::to_string() const {
    if (m_den == 1) return std::to_string(m_num);
    return std::to_string(m_num) + "/" + std::to_string(m_den);
}

} // namespace dlp
