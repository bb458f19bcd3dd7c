"""Pure-Python simulation loop (fallback backend).

This is the reference implementation of the inner recurrence.  The
compiled backend ``_core_cy`` mirrors it statement for statement; both
must produce bit-identical output arrays, which the test suite enforces.
Keep the arithmetic expression order in sync between the two files and
with ``battery.charge``/``battery.discharge``.
"""

import math


def _cum_sunlit(x, period, sunlit):
    # total sunlit minutes in [0, x)
    r = math.fmod(x, period)
    n = float(round((x - r) / period))
    s = r if r < sunlit else sunlit
    return n * sunlit + s


def simulate(n_steps, dt_min, period_min, sunlit_min, insolation_kw,
             sched_start, sched_scale,
             enabled, low_thr, high_thr,
             load_full, load_mid, load_low,
             soc0, capacity_kwh, max_charge_kw, max_discharge_kw,
             out_phase, out_scale, out_available, out_tier, out_load,
             out_delivered, out_curtailed, out_flow, out_soc, out_unserved):
    """Fill the per-step output arrays for one simulation run.

    Tier codes: 0 = FULL, 1 = MID, 2 = LOW.  Phase codes: 1 = insolation,
    0 = eclipse (classified at the step start; the available power uses
    the exact sunlit fraction of the step).  ``out_soc`` holds the SoC at
    the end of each step; the controller acts on the SoC at the start.
    """
    hours = dt_min / 60.0
    soc = soc0
    si = 0
    nsched = len(sched_start)
    for i in range(n_steps):
        t = i * dt_min
        while si + 1 < nsched and sched_start[si + 1] <= t:
            si += 1
        sc = sched_scale[si]
        r = math.fmod(t, period_min)
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
        out_tier[i] = tier
        out_load[i] = load
        out_delivered[i] = delivered
        out_curtailed[i] = curtailed
        out_flow[i] = flow
        out_soc[i] = soc
        out_unserved[i] = unserved
