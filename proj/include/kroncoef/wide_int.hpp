#pragma once

#include <cstdint>

namespace kroncoef::detail {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

inline bool add_checked(i64 a, i64 b, i64& out) { return !__builtin_add_overflow(a, b, &out); }
inline bool mul_checked(i64 a, i64 b, i64& out) { return !__builtin_mul_overflow(a, b, &out); }
inline bool add_checked(i128 a, i128 b, i128& out) { return !__builtin_add_overflow(a, b, &out); }
inline bool mul_checked(i128 a, i128 b, i128& out) { return !__builtin_mul_overflow(a, b, &out); }

/// Two's-complement 256-bit integer, value = hi * 2^128 + lo.
///
/// Fallback accumulator for character sums whose checked 128-bit path
/// overflowed. Supports exactly what that path needs: signed accumulation
/// of 128x64-bit products and exact division by a 64-bit factorial.
struct Int256 {
    u128 lo = 0;
    i128 hi = 0;

    static Int256 from_i128(i128 v) {
        Int256 r;
        r.lo = static_cast<u128>(v);
        r.hi = v < 0 ? -1 : 0;
        return r;
    }

    void add(const Int256& o) {
        const u128 before = lo;
        lo += o.lo;
        hi += o.hi + (lo < before ? 1 : 0);
    }

    void add_i128(i128 v) { add(from_i128(v)); }

    bool negative() const { return hi < 0; }

    Int256 negated() const {
        Int256 r;
        r.lo = ~lo + 1;
        r.hi = ~hi + (r.lo == 0 ? 1 : 0);
        return r;
    }

    bool is_zero() const { return lo == 0 && hi == 0; }

    /// Full product of a signed 128-bit and a signed 64-bit value.
    static Int256 mul_i128_i64(i128 a, i64 b) {
        const bool neg = (a < 0) != (b < 0);
        u128 ua = a < 0 ? static_cast<u128>(-(a + 1)) + 1 : static_cast<u128>(a);
        u128 ub = b < 0 ? static_cast<u128>(-(b + 1)) + 1 : static_cast<u128>(b);
        const u64 a_lo = static_cast<u64>(ua);
        const u64 a_hi = static_cast<u64>(ua >> 64);
        const u128 p_lo = static_cast<u128>(a_lo) * ub;
        const u128 p_hi = static_cast<u128>(a_hi) * ub;
        Int256 r;
        r.lo = p_lo + (p_hi << 64);
        r.hi = static_cast<i128>((p_hi >> 64) + (r.lo < p_lo ? 1 : 0));
        return neg ? r.negated() : r;
    }

    /// Quotient and remainder of |*this| by d, with the sign of *this.
    /// The quotient must fit a signed 128-bit integer (true for all uses here).
    void divmod_u64(u64 d, i128& quotient, u64& remainder) const {
        const Int256 abs = negative() ? negated() : *this;
        const u64 limbs[4] = {
            static_cast<u64>(abs.hi >> 64), static_cast<u64>(abs.hi),
            static_cast<u64>(abs.lo >> 64), static_cast<u64>(abs.lo)};
        u64 q[4] = {0, 0, 0, 0};
        u128 rem = 0;
        for (int i = 0; i < 4; ++i) {
            const u128 cur = (rem << 64) | limbs[i];
            q[i] = static_cast<u64>(cur / d);
            rem = cur % d;
        }
        u128 uq = (static_cast<u128>(q[2]) << 64) | q[3];
        i128 signed_q = static_cast<i128>(uq);
        if (negative()) signed_q = -signed_q;
        quotient = signed_q;
        remainder = static_cast<u64>(rem);
    }
};

}  // namespace kroncoef::detail
