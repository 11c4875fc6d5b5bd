# distutils: language = c++
# cython: language_level=3
"""Compiled sparse elimination with checked 64-bit arithmetic.

Same pivot rule as the pure-Python kernel: smallest |value|, ties broken by
(row, col).  Any overflow raises OverflowError so the caller can fall back
to arbitrary precision.
"""
from libcpp.vector cimport vector
from libc.stdint cimport int64_t

cdef extern from *:
    """
    #include <cstdint>
    #include <queue>
    #include <vector>
    #include <algorithm>
    #include <unordered_map>
    #include <unordered_set>

    struct ElimKey { int64_t a; int r; int c; };
    struct ElimKeyGreater {
        bool operator()(const ElimKey& x, const ElimKey& y) const {
            if (x.a != y.a) return x.a > y.a;
            if (x.r != y.r) return x.r > y.r;
            return x.c > y.c;
        }
    };

    static inline bool elim_abs(int64_t v, int64_t* out) {
        if (v == INT64_MIN) return true;
        *out = v < 0 ? -v : v;
        return false;
    }

    static inline int64_t floor_div(int64_t a, int64_t p) {
        int64_t q = a / p;
        if ((a % p != 0) && ((a < 0) != (p < 0))) q -= 1;
        return q;
    }

    static inline int64_t floor_mod(int64_t a, int64_t p) {
        int64_t r = a % p;
        if (r != 0 && ((r < 0) != (p < 0))) r += p;
        return r;
    }

    // returns 0 on success, 1 on overflow
    static int elim_invariant_factors(int nrows, int ncols,
                                      const std::vector<int>& er,
                                      const std::vector<int>& ec,
                                      const std::vector<int64_t>& ev,
                                      std::vector<int64_t>& diag) {
        std::vector<std::unordered_map<int, int64_t>> rows(nrows);
        std::vector<std::unordered_set<int>> cols(ncols);
        std::priority_queue<ElimKey, std::vector<ElimKey>, ElimKeyGreater> heap;
        for (size_t t = 0; t < er.size(); ++t) {
            if (ev[t] == 0) continue;
            int64_t a;
            if (elim_abs(ev[t], &a)) return 1;
            rows[er[t]][ec[t]] = ev[t];
            cols[ec[t]].insert(er[t]);
            heap.push({a, er[t], ec[t]});
        }
        std::vector<char> alive(nrows, 1);
        std::vector<int> others;
        std::vector<std::pair<int, int64_t>> prow;
        while (!heap.empty()) {
            ElimKey k = heap.top();
            heap.pop();
            int r = k.r, c = k.c;
            if (!alive[r]) continue;
            auto it = rows[r].find(c);
            if (it == rows[r].end()) continue;
            int64_t p = it->second;
            int64_t ap;
            if (elim_abs(p, &ap)) return 1;
            if (ap != k.a) continue;
            others.assign(cols[c].begin(), cols[c].end());
            std::sort(others.begin(), others.end());
            prow.assign(rows[r].begin(), rows[r].end());
            bool residual = false;
            for (int r2 : others) {
                if (r2 == r) continue;
                auto& row2 = rows[r2];
                int64_t q = floor_div(row2[c], p);
                for (auto& e : prow) {
                    int c2 = e.first;
                    auto f = row2.find(c2);
                    int64_t old = f == row2.end() ? 0 : f->second;
                    int64_t prod, nv;
                    if (__builtin_mul_overflow(q, e.second, &prod)) return 1;
                    if (__builtin_sub_overflow(old, prod, &nv)) return 1;
                    if (nv) {
                        if (f == row2.end()) {
                            row2.emplace(c2, nv);
                            cols[c2].insert(r2);
                        } else {
                            f->second = nv;
                        }
                        int64_t an;
                        if (elim_abs(nv, &an)) return 1;
                        heap.push({an, r2, c2});
                    } else if (f != row2.end()) {
                        row2.erase(f);
                        cols[c2].erase(r2);
                    }
                }
                if (row2.count(c)) residual = true;
            }
            if (residual) {
                heap.push({ap, r, c});
                continue;
            }
            auto& pr = rows[r];
            prow.assign(pr.begin(), pr.end());
            for (auto& e : prow) {
                int c2 = e.first;
                if (c2 == c) continue;
                int64_t nv = floor_mod(e.second, p);
                if (nv) {
                    pr[c2] = nv;
                    int64_t an;
                    if (elim_abs(nv, &an)) return 1;
                    heap.push({an, r, c2});
                    residual = true;
                } else {
                    pr.erase(c2);
                    cols[c2].erase(r);
                }
            }
            if (residual) {
                heap.push({ap, r, c});
                continue;
            }
            diag.push_back(ap);
            alive[r] = 0;
            pr.clear();
            cols[c].clear();
        }
        return 0;
    }
    """
    int elim_invariant_factors(int nrows, int ncols, const vector[int]& er,
                               const vector[int]& ec, const vector[int64_t]& ev,
                               vector[int64_t]& diag) nogil


def invariant_factors_int64(int nrows, int ncols, entries):
    """Pivot values of the elimination; raises OverflowError outside int64."""
    cdef vector[int] er, ec
    cdef vector[int64_t] ev, diag
    cdef int status
    for r, c, v in entries:
        er.push_back(r)
        ec.push_back(c)
        ev.push_back(v)
    with nogil:
        status = elim_invariant_factors(nrows, ncols, er, ec, ev, diag)
    if status:
        raise OverflowError("entry left the 64-bit range")
    return [int(x) for x in diag]
