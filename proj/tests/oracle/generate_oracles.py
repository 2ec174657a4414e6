#!/usr/bin/env python3
# Copyright 2026 The spotvol Authors
# SPDX-License-Identifier: Apache-2.0
"""Writes oracle_values.hpp: reference values computed with mpmath (30 digits)
and numpy's Philox, independently of the C++ implementation.

    python3 tests/oracle/generate_oracles.py > tests/oracle/oracle_values.hpp
"""
import numpy as np
from mpmath import mp, mpf, sqrt, exp, log, erfc, gammainc, gamma, pi, findroot, npdf, ncdf

mp.dps = 30
SQ2 = sqrt(2)


def Phi(x):
    return erfc(-mpf(x) / SQ2) / 2


def quantile(p):
    return findroot(lambda z: Phi(z) - p, mpf(0))


def chisq_cdf(x, k):
    return gammainc(mpf(k) / 2, 0, mpf(x) / 2, regularized=True)


def chisq_sf(x, k):
    return gammainc(mpf(k) / 2, mpf(x) / 2, mp.inf, regularized=True)


def H(order, x):
    x = mpf(x)
    return {1: x, 3: x**3 - 3 * x, 5: x**5 - 10 * x**3 + 15 * x}[order]


def p1(x):
    return -(SQ2 / 3) * (mpf(x) ** 2 - 1)


def p2(x):
    return -H(3, x) / 2 - H(5, x) / 9


def q1(x):
    return SQ2 + (2 * SQ2 / 3) * (mpf(x) ** 2 - 1)


def q2(x, printed=False):
    s = mpf(4) / 9 if printed else -mpf(4) / 9
    return -5 * H(1, x) - mpf(23) / 6 * H(3, x) + s * H(5, x)


def exact_cdf_M(x, k):
    return chisq_cdf(k + mpf(x) * sqrt(2 * k), k)


def exact_cdf_T(x, k):
    c = 1 - mpf(x) * sqrt(mpf(2) / k)
    return chisq_cdf(k / c, k) if c > 0 else mpf(1)


def factors(method, k, level, printed=False):
    k = mpf(k)
    if method in (0, 1):
        z = quantile(1 - mpf(level))
        up = 1 - SQ2 * z / sqrt(k)
        if method == 1:
            up += SQ2 * q1(z) / k
        return (mpf(0), up)
    z = quantile((1 + mpf(level)) / 2)
    a = SQ2 * z / sqrt(k)
    if method == 3:
        a -= SQ2 * q2(z, printed) / k**mpf(1.5)
    return (1 - a, 1 + a)


def coverage(method, k, level=mpf("0.95"), printed=False):
    # estimate v = chi2 / k (sigma^2 = 1); covered iff v*lo < 1 < v*up
    lo, up = factors(method, k, level, printed)
    cov = chisq_sf(k / up, k)
    if lo > 0:
        cov -= chisq_sf(k / lo, k)
    return cov


def inv_moment(k, m):
    # E[(chi2_k)^-m] = 1 / prod_{j=1..m} (k - 2j)
    r = mpf(1)
    for j in range(1, m + 1):
        r /= (k - 2 * j)
    return r


def t_cumulants(k):
    k = mpf(k)
    c = sqrt(k / 2)
    # raw moments of T = c (1 - k W), W = 1/chi2
    def raw(r):
        tot = mpf(0)
        from math import comb
        for j in range(r + 1):
            tot += comb(r, j) * (-k) ** j * inv_moment(k, j)
        return c**r * tot
    m1, m2, m3, m4 = raw(1), raw(2), raw(3), raw(4)
    k1 = m1
    k2 = m2 - m1**2
    k3 = m3 - 3 * m2 * m1 + 2 * m1**3
    k4 = m4 - 4 * m3 * m1 - 3 * m2**2 + 12 * m2 * m1**2 - 6 * m1**4
    return k1, k2, k3, k4


def m_moments(k):
    # M = (chi2 - k)/sqrt(2k); central moments of chi2: 2k, 8k, 12k^2 + 48k
    k = mpf(k)
    s = sqrt(2 * k)
    return 8 * k / s**3, (12 * k**2 + 48 * k) / s**4


def philox(counter, key):
    # numpy advances the counter before generating, so start one below
    c = [int(x) for x in counter]
    i = 0
    while True:
        c[i] = (c[i] - 1) % 2**64
        if c[i] != 2**64 - 1:
            break
        i += 1
        if i == 4:
            break
    g = np.random.Philox(counter=np.array(c, dtype=np.uint64), key=np.array(key, dtype=np.uint64))
    return [int(v) for v in g.random_raw(4)]


def f(x):
    x = mpf(x)
    l = log(mpf("1.5"))
    return exp(x) if x <= l else mpf("1.5") * sqrt(1 - l + x * x / l)


def d(v):
    return mp.nstr(mpf(v), 20)


out = []
emit = out.append
LICENSE = """/*
   Copyright 2026 The spotvol Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/
"""
emit(LICENSE)
emit("// Generated by generate_oracles.py; do not edit.")
emit("#pragma once")
emit("")
emit("#include <array>")
emit("#include <cstdint>")
emit("")
emit("namespace oracle {")
emit("")
emit(f"inline constexpr double normal_cdf_1_96 = {d(Phi('1.96'))};")
emit(f"inline constexpr double normal_cdf_m1_645 = {d(Phi('-1.645'))};")
emit(f"inline constexpr double normal_pdf_0 = {d(npdf(0))};")
emit(f"inline constexpr double normal_quantile_0_975 = {d(quantile(mpf('0.975')))};")
emit(f"inline constexpr double normal_quantile_0_05 = {d(quantile(mpf('0.05')))};")
emit(f"inline constexpr double chisq2_cdf_0_7561 = {d(chisq_cdf('0.7561', 2))};")
emit(f"inline constexpr double chisq13_cdf_10 = {d(chisq_cdf(10, 13))};")
emit(f"inline constexpr double chisq76_sf_60 = {d(chisq_sf(60, 76))};")
emit(f"inline constexpr double chisq1000_cdf_1050 = {d(chisq_cdf(1050, 1000))};")
emit(f"inline constexpr double chisq10000_sf_10300 = {d(chisq_sf(10300, 10000))};")
emit(f"inline constexpr double gamma_p_2_5_1_5 = {d(gammainc(mpf('2.5'), 0, mpf('1.5'), regularized=True))};")
emit("")
emit(f"inline constexpr double q1_m1_645 = {d(q1('-1.645'))};")
emit(f"inline constexpr double q2_printed_1_96 = {d(q2('1.96', True))};")
emit(f"inline constexpr double q2_derived_1_96 = {d(q2('1.96'))};")
emit(f"inline constexpr double p2_0_7 = {d(p2('0.7'))};")
emit(f"inline constexpr double edgeworth_S_0_100 = {d(Phi(0) + p1(0) * npdf(0) / 10)};")
emit(f"inline constexpr double edgeworth_S_0_25 = {d(Phi(0) + p1(0) * npdf(0) / 5)};")
emit("")
emit("// Upper bounds / half-widths at estimate 1 with rounded quantiles.")
z1, z2 = mpf("-1.645"), mpf("1.96")
emit(f"inline constexpr double n1_upper_k100 = {d(1 - SQ2 * z1 / 10)};")
emit(f"inline constexpr double e1_upper_k100 = {d(1 - SQ2 * z1 / 10 + SQ2 * q1(z1) / 100)};")
emit(f"inline constexpr double e1_upper_k76 = {d(1 - SQ2 * z1 / sqrt(76) + SQ2 * q1(z1) / 76)};")
emit(f"inline constexpr double n2_half_k100 = {d(SQ2 * z2 / 10)};")
emit(f"inline constexpr double e2_half_k100_printed = {d(SQ2 * z2 / 10 - SQ2 * q2(z2, True) / 1000)};")
emit(f"inline constexpr double e2_half_k76_printed = {d(SQ2 * z2 / sqrt(76) - SQ2 * q2(z2, True) / mpf(76)**mpf(1.5))};")
emit(f"inline constexpr double e2_half_k100_derived = {d(SQ2 * z2 / 10 - SQ2 * q2(z2) / 1000)};")
emit("")
emit(f"inline constexpr double growth_f_1 = {d(f(1))};")
emit("")
emit("// Exact constant-volatility coverage, level 0.95, exact quantiles.")
emit("// Rows: normal 1-sided, edgeworth 1-sided, normal 2-sided, edgeworth 2-sided.")
ks = [2, 10, 13, 25, 50, 76, 100, 400, 1600]
emit(f"inline constexpr std::array<std::int64_t, {len(ks)}> coverage_kn = {{{', '.join(map(str, ks))}}};")
emit(f"inline constexpr double coverage_table[4][{len(ks)}] = {{")
for m in range(4):
    emit("    {" + ", ".join(d(coverage(m, k)) for k in ks) + "},")
emit("};")
emit(f"inline constexpr double coverage_e2_printed_k100 = {d(coverage(3, 100, printed=True))};")
emit(f"inline constexpr double rate_constant = {d(npdf(quantile(mpf('0.05'))) * q1(quantile(mpf('0.05'))))};")
emit("")
emit("// Exact CDFs of M and T on x = -3..3.")
for k in (25, 100, 400):
    emit(f"inline constexpr std::array<double, 7> cdf_M_k{k} = {{" + ", ".join(d(exact_cdf_M(x, k)) for x in range(-3, 4)) + "};")
    emit(f"inline constexpr std::array<double, 7> cdf_T_k{k} = {{" + ", ".join(d(exact_cdf_T(x, k)) for x in range(-3, 4)) + "};")
emit("")
for k in (50, 200):
    c = t_cumulants(k)
    emit(f"inline constexpr std::array<double, 4> t_cumulants_k{k} = {{" + ", ".join(d(v) for v in c) + "};")
m3, m4 = m_moments(50)
emit(f"inline constexpr double m3_k50 = {d(m3)};")
emit(f"inline constexpr double m4_k50 = {d(m4)};")
emit("")
emit("// Philox4x64-10: {counter, key, output}.")
emit("struct PhiloxVector {")
emit("    std::array<std::uint64_t, 4> counter;")
emit("    std::array<std::uint64_t, 2> key;")
emit("    std::array<std::uint64_t, 4> output;")
emit("};")
vecs = [([0, 0, 0, 0], [0, 0]),
        ([1, 0, 0, 0], [0x123456789abcdef0, 0x0fedcba987654321]),
        ([7, 7, 8, 9], [11, 12]),
        ([2**64 - 1, 2**64 - 1, 2**64 - 1, 2**64 - 1], [2**64 - 1, 2**64 - 1])]
emit(f"inline constexpr std::array<PhiloxVector, {len(vecs)}> philox_vectors = {{{{")
for c, k in vecs:
    o = philox(c, k)
    h = lambda xs: ", ".join(f"0x{x:016x}ULL" for x in xs)
    emit(f"    {{{{{h(c)}}}, {{{h(k)}}}, {{{h(o)}}}}},")
emit("}};")
emit("")
emit("} // namespace oracle")
print("\n".join(out))
