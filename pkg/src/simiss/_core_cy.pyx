# cython: boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled simulation loop.

Statement-for-statement mirror of ``_core_py.simulate``; see that module
for semantics.  Both backends must produce bit-identical arrays, so the
extension is compiled with floating-point contraction disabled and this
file must keep the exact expression order of the pure-Python loop.
"""

from libc.math cimport fmod, llround


cdef inline double _cum_sunlit(double x, double period, double sunlit) nogil:
    # total sunlit minutes in [0, x)
    cdef double r = fmod(x, period)
    cdef double n = <double>llround((x - r) / period)
    cdef double s = r if r < sunlit else sunlit
    return n * sunlit + s


def simulate(Py_ssize_t n_steps, double dt_min, double period_min,
             double sunlit_min, double insolation_kw,
             double[::1] sched_start, double[::1] sched_scale,
             int enabled, double low_thr, double high_thr,
             double load_full, double load_mid, double load_low,
             double soc0, double capacity_kwh,
             double max_charge_kw, double max_discharge_kw,
             unsigned char[::1] out_phase, double[::1] out_scale,
             double[::1] out_available, unsigned char[::1] out_tier,
             double[::1] out_load, double[::1] out_delivered,
             double[::1] out_curtailed, double[::1] out_flow,
             double[::1] out_soc, double[::1] out_unserved):
    cdef double hours = dt_min / 60.0
    cdef double soc = soc0
    cdef Py_ssize_t si = 0
    cdef Py_ssize_t nsched = sched_start.shape[0]
    cdef Py_ssize_t i
    cdef double t, sc, r, frac, avail, load
    cdef double offered, accepted, headroom_kw, curtailed, delivered
    cdef double request, drawn, stored_kw, flow, unserved
    cdef int tier, sun_now

    with nogil:
        for i in range(n_steps):
            t = i * dt_min
            while si + 1 < nsched and sched_start[si + 1] <= t:
                si += 1
            sc = sched_scale[si]
            r = fmod(t, period_min)
            sun_now = r < sunlit_min
            frac = (_cum_sunlit(t + dt_min, period_min, sunlit_min)
                    - _cum_sunlit(t, period_min, sunlit_min)) / dt_min
            if frac < 0.0:
                frac = 0.0
            elif frac > 1.0:
                frac = 1.0
            avail = insolation_kw * sc * frac

            if not enabled:
                tier = 0
            elif soc < low_thr:
                tier = 2
            elif soc < high_thr:
                tier = 1
            else:
                tier = 0
            if tier == 0:
                load = load_full
            elif tier == 1:
                load = load_mid
            else:
                load = load_low

            if avail >= load:
                offered = avail - load
                accepted = offered
                if accepted > max_charge_kw:
                    accepted = max_charge_kw
                headroom_kw = (100.0 - soc) / 100.0 * capacity_kwh / hours
                if accepted >= headroom_kw:
                    accepted = headroom_kw
                    soc = 100.0
                else:
                    soc = soc + accepted * hours / capacity_kwh * 100.0
                    if soc > 100.0:
                        soc = 100.0
                curtailed = offered - accepted
                delivered = load + accepted
                flow = accepted
                unserved = 0.0
            else:
                request = load - avail
                drawn = request
                if drawn > max_discharge_kw:
                    drawn = max_discharge_kw
                stored_kw = soc / 100.0 * capacity_kwh / hours
                if drawn >= stored_kw:
                    drawn = stored_kw
                    soc = 0.0
                else:
                    soc = soc - drawn * hours / capacity_kwh * 100.0
                    if soc < 0.0:
                        soc = 0.0
                delivered = avail
                curtailed = 0.0
                flow = 0.0 if drawn == 0.0 else -drawn
                unserved = request - drawn

            out_phase[i] = 1 if sun_now else 0
            out_scale[i] = sc
            out_available[i] = avail
            out_tier[i] = <unsigned char>tier
            out_load[i] = load
            out_delivered[i] = delivered
            out_curtailed[i] = curtailed
            out_flow[i] = flow
            out_soc[i] = soc
            out_unserved[i] = unserved
