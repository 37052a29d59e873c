"""Compiled inner loops: coupling evaluation, network vector fields and the
Dormand-Prince 5(4) stepper.

Couplings reach this module as a *table*, a 4-tuple of float arrays::

    base     (5, K)  rows: harmonic r, amplitude c, phase shift xi,
                     c*cos(xi), c*sin(xi); columns sorted by r
    mod      (5, M)  same layout, multiplied by the bump
    bump     (2,)    amplitude a, half-width b (a == 0 disables)
    offsets  (4, L)  rows: lo, hi, amplitude, blend width

Everything here is nopython numba; the Python wrappers live in
``coupling``, ``dynamics`` and ``integrate``.
"""

import math

import numpy as np
from numba import njit

TWO_PI = 2.0 * math.pi

KIND_NETWORK = 0
KIND_LINEAR = 1

STATUS_OK = 0
STATUS_UNDERFLOW = 1
STATUS_MAX_STEPS = 2


@njit(cache=True)
def _fourier(phi, terms):
    # terms rows: r, c, xi, c*cos(xi), c*sin(xi); columns sorted by r
    v = 0.0
    d = 0.0
    if terms.shape[1] == 0:
        return v, d
    c1 = math.cos(phi)
    s1 = math.sin(phi)
    cr = 1.0
    sr = 0.0
    power = 0
    for i in range(terms.shape[1]):
        r = int(terms[0, i])
        while power < r:
            cr, sr = cr * c1 - sr * s1, sr * c1 + cr * s1
            power += 1
        a = terms[3, i]
        bb = terms[4, i]
        v += a * cr - bb * sr
        d -= r * (a * sr + bb * cr)
    return v, d


@njit(cache=True)
def _fourier_pair(phi, terms):
    """Values and derivatives at phi and -phi from one harmonic sweep."""
    vp = 0.0
    vm = 0.0
    dp = 0.0
    dm = 0.0
    if terms.shape[1] == 0:
        return vp, dp, vm, dm
    c1 = math.cos(phi)
    s1 = math.sin(phi)
    cr = 1.0
    sr = 0.0
    power = 0
    for i in range(terms.shape[1]):
        r = int(terms[0, i])
        while power < r:
            cr, sr = cr * c1 - sr * s1, sr * c1 + cr * s1
            power += 1
        a = terms[3, i]
        bb = terms[4, i]
        vp += a * cr - bb * sr
        vm += a * cr + bb * sr
        dp -= r * (a * sr + bb * cr)
        dm -= r * (bb * cr - a * sr)
    return vp, dp, vm, dm


@njit(cache=True)
def bump_value(phi, a, b):
    """a * beta(phi / b) with phi taken in (-pi, pi]; returns value and derivative."""
    if a == 0.0:
        return 0.0, 0.0
    w = phi % TWO_PI
    if w > math.pi:
        w -= TWO_PI
    x = w / b
    if x <= -1.0 or x >= 1.0:
        return 0.0, 0.0
    q = 1.0 - x * x
    beta = math.exp(-1.0 / q)
    dbeta = beta * (-2.0 * x / (q * q))
    return a * beta, a * dbeta / b


@njit(cache=True)
def smooth_step(u):
    """C-infinity step: 0 for u <= 0, 1 for u >= 1."""
    if u <= 0.0:
        return 0.0, 0.0
    if u >= 1.0:
        return 1.0, 0.0
    e1 = math.exp(-1.0 / u)
    e2 = math.exp(-1.0 / (1.0 - u))
    de1 = e1 / (u * u)
    de2 = -e2 / ((1.0 - u) * (1.0 - u))
    s = e1 + e2
    return e1 / s, (de1 * e2 - e1 * de2) / (s * s)


@njit(cache=True)
def arc_window(phi, lo, hi, blend):
    """1 on the arc [lo, hi] (mod 2pi), 0 beyond `blend`, smooth in between."""
    width = hi - lo
    u = (phi - lo) % TWO_PI
    if u <= width:
        return 1.0, 0.0
    if blend <= 0.0:
        return 0.0, 0.0
    if u < width + blend:
        s, ds = smooth_step((width + blend - u) / blend)
        return s, -ds / blend
    if u > TWO_PI - blend:
        s, ds = smooth_step((u - (TWO_PI - blend)) / blend)
        return s, ds / blend
    return 0.0, 0.0


@njit(cache=True)
def coupling_eval(phi, base, mod, bump, offsets):
    """Value and derivative of a composite coupling at one phase."""
    phi = phi % TWO_PI
    v, d = _fourier(phi, base)
    if bump[0] != 0.0 and mod.shape[1] > 0:
        bv, bd = bump_value(phi, bump[0], bump[1])
        if bv != 0.0 or bd != 0.0:
            mv, md = _fourier(phi, mod)
            v += mv * bv
            d += md * bv + mv * bd
    for i in range(offsets.shape[1]):
        w, dw = arc_window(phi, offsets[0, i], offsets[1, i], offsets[3, i])
        v += offsets[2, i] * w
        d += offsets[2, i] * dw
    return v, d


@njit(cache=True)
def coupling_eval_pair(phi, base, mod, bump, offsets):
    """(g(phi), g'(phi), g(-phi), g'(-phi))."""
    phi = phi % TWO_PI
    vp, dp, vm, dm = _fourier_pair(phi, base)
    if bump[0] != 0.0 and mod.shape[1] > 0:
        bv, bd = bump_value(phi, bump[0], bump[1])
        if bv != 0.0 or bd != 0.0:
            mvp, mdp, mvm, mdm = _fourier_pair(phi, mod)
            # the bump is even: beta(-phi) = beta(phi), beta'(-phi) = -beta'(phi)
            vp += mvp * bv
            dp += mdp * bv + mvp * bd
            vm += mvm * bv
            dm += mdm * bv - mvm * bd
    for i in range(offsets.shape[1]):
        w, dw = arc_window(phi, offsets[0, i], offsets[1, i], offsets[3, i])
        vp += offsets[2, i] * w
        dp += offsets[2, i] * dw
        w, dw = arc_window(-phi, offsets[0, i], offsets[1, i], offsets[3, i])
        vm += offsets[2, i] * w
        dm += offsets[2, i] * dw
    return vp, dp, vm, dm


@njit(cache=True)
def coupling_eval_array(phis, base, mod, bump, offsets):
    out = np.empty(phis.size)
    dout = np.empty(phis.size)
    flat = phis.ravel()
    for i in range(flat.size):
        out[i], dout[i] = coupling_eval(flat[i], base, mod, bump, offsets)
    return out.reshape(phis.shape), dout.reshape(phis.shape)


@njit(cache=True)
def network_rhs(y, n_state, tangent, omega, H, inv_n, base, mod, bump, offsets, out):
    """dx_k = omega_k + inv_n * sum_j H_kj g(x_k - x_j), plus J v when `tangent`."""
    g0, _ = coupling_eval(0.0, base, mod, bump, offsets)
    for k in range(n_state):
        out[k] = H[k, k] * g0
        if tangent:
            out[n_state + k] = 0.0
    for k in range(n_state):
        for j in range(k + 1, n_state):
            hkj = H[k, j]
            hjk = H[j, k]
            if hkj == 0.0 and hjk == 0.0:
                continue
            vp, dp, vm, dm = coupling_eval_pair(y[k] - y[j], base, mod, bump, offsets)
            out[k] += hkj * vp
            out[j] += hjk * vm
            if tangent:
                dv = y[n_state + k] - y[n_state + j]
                out[n_state + k] += hkj * dp * dv
                out[n_state + j] -= hjk * dm * dv
    for k in range(n_state):
        out[k] = omega[k] + inv_n * out[k]
        if tangent:
            out[n_state + k] *= inv_n


@njit(cache=True)
def network_jacobian(x, omega, H, inv_n, base, mod, bump, offsets):
    n = x.size
    J = np.zeros((n, n))
    for k in range(n):
        for j in range(n):
            if j == k or H[k, j] == 0.0:
                continue
            _, gd = coupling_eval(x[k] - x[j], base, mod, bump, offsets)
            J[k, j] = -inv_n * H[k, j] * gd
            J[k, k] += inv_n * H[k, j] * gd
    return J


@njit(cache=True)
def linear_rhs(y, n_state, tangent, A, b, out):
    for k in range(n_state):
        acc = b[k]
        for j in range(n_state):
            acc += A[k, j] * y[j]
        out[k] = acc
        if tangent:
            tacc = 0.0
            for j in range(n_state):
                tacc += A[k, j] * y[n_state + j]
            out[n_state + k] = tacc


@njit(cache=True)
def _rhs(kind, y, n_state, tangent, omega, H, inv_n, base, mod, bump, offsets, A, b, out):
    if kind == KIND_NETWORK:
        network_rhs(y, n_state, tangent, omega, H, inv_n, base, mod, bump, offsets, out)
    else:
        linear_rhs(y, n_state, tangent, A, b, out)


# Dormand-Prince 5(4) tableau with the Shampine continuous extension.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0])
_A = np.array([
    [0.0, 0.0, 0.0, 0.0, 0.0],
    [1 / 5, 0.0, 0.0, 0.0, 0.0],
    [3 / 40, 9 / 40, 0.0, 0.0, 0.0],
    [44 / 45, -56 / 15, 32 / 9, 0.0, 0.0],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729, 0.0],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
])
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84])
_E = np.array([-71 / 57600, 0.0, 71 / 16695, -71 / 1920, 17253 / 339200, -22 / 525, 1 / 40])
_P = np.array([
    [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
    [0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
    [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
    [0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
    [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 10.0
_BETA = 0.04
_ALPHA = 0.2 - 0.75 * _BETA


@njit(cache=True)
def _err_norm(e, y0, y1, n_state, rtol, atol):
    # state components: mixed per-component scale; tangent components: scaled
    # by the tangent norm, since only its direction and growth are used
    s = 0.0
    for i in range(n_state):
        sc = atol + rtol * max(abs(y0[i]), abs(y1[i]))
        q = e[i] / sc
        s += q * q
    if e.size > n_state:
        n0 = 0.0
        n1 = 0.0
        for i in range(n_state, e.size):
            n0 += y0[i] * y0[i]
            n1 += y1[i] * y1[i]
        sc = atol + rtol * math.sqrt(max(n0, n1))
        for i in range(n_state, e.size):
            q = e[i] / sc
            s += q * q
    return math.sqrt(s / e.size)


@njit(cache=True)
def dopri_run(kind, omega, H, inv_n, base, mod, bump, offsets, A, b,
              y0, n_state, tangent, T, rtol, atol, max_step, first_step,
              record_dt, renorm_dt, max_steps):
    """Integrate from t=0 to T, recording the state part on a record_dt grid.

    Returns (times, states, final, log_growth, status, t_end, n_steps,
    n_rejected, n_lift_rejected, nfev).  log_growth[i] is the log of the
    tangent-norm growth over renormalization interval i.
    """
    dim = y0.size
    n_rec = int(math.floor(T / record_dt + 1e-9)) + 1
    last_grid = (n_rec - 1) * record_dt
    extra = 1 if T - last_grid > 1e-12 * max(1.0, T) else 0
    times = np.empty(n_rec + extra)
    states = np.empty((n_rec + extra, n_state))
    for i in range(n_rec):
        times[i] = i * record_dt
    if extra:
        times[n_rec] = T
    n_ren = int(math.floor(T / renorm_dt + 1e-9)) + 1 if tangent else 0
    log_growth = np.zeros(n_ren)

    K = np.empty((7, dim))
    y = y0.copy()
    ynew = np.empty(dim)
    ytmp = np.empty(dim)
    err = np.empty(dim)
    _rhs(kind, y, n_state, tangent, omega, H, inv_n, base, mod, bump, offsets, A, b, K[0])
    nfev = 1
    for k in range(n_state):
        states[0, k] = y[k]
    rec_i = 1

    t = 0.0
    h = min(first_step, max_step, T)
    err_old = 1e-4
    n_steps = 0
    n_rej = 0
    n_lift = 0
    ren_i = 0
    next_ren = renorm_dt if tangent else math.inf
    status = STATUS_OK
    while t < T:
        if n_steps + n_rej >= max_steps:
            status = STATUS_MAX_STEPS
            break
        h = min(h, max_step)
        h_prop = h
        t_stop = min(T, next_ren)
        clipped = False
        if t + h >= t_stop - 1e-12 * max(1.0, t_stop):
            h = t_stop - t
            clipped = True
        if h < 1e-13 * max(1.0, abs(t)):
            status = STATUS_UNDERFLOW
            break
        for s in range(1, 6):
            for i in range(dim):
                acc = 0.0
                for m in range(s):
                    acc += _A[s, m] * K[m, i]
                ytmp[i] = y[i] + h * acc
            _rhs(kind, ytmp, n_state, tangent, omega, H, inv_n, base, mod, bump, offsets, A, b, K[s])
        for i in range(dim):
            acc = 0.0
            for m in range(6):
                acc += _B[m] * K[m, i]
            ynew[i] = y[i] + h * acc
        _rhs(kind, ynew, n_state, tangent, omega, H, inv_n, base, mod, bump, offsets, A, b, K[6])
        nfev += 6
        for i in range(dim):
            acc = 0.0
            for m in range(7):
                acc += _E[m] * K[m, i]
            err[i] = h * acc
        en = _err_norm(err, y, ynew, n_state, rtol, atol)

        lift_ok = True
        if kind == KIND_NETWORK:
            for i in range(n_state):
                if abs(ynew[i] - y[i]) >= math.pi:
                    lift_ok = False
        if not lift_ok:
            n_lift += 1
            n_rej += 1
            h *= 0.5
            continue

        if en <= 1.0:
            # dense output onto the record grid
            t_new = t + h
            while rec_i < times.size and times[rec_i] <= t_new + 1e-12 * max(1.0, t_new):
                theta = (times[rec_i] - t) / h
                if theta > 1.0:
                    theta = 1.0
                for i in range(n_state):
                    acc = 0.0
                    for m in range(7):
                        pm = _P[m]
                        acc += K[m, i] * theta * (pm[0] + theta * (pm[1] + theta * (pm[2] + theta * pm[3])))
                    states[rec_i, i] = y[i] + h * acc
                rec_i += 1
            if clipped:
                t = t_stop
            else:
                t = t_new
            for i in range(dim):
                y[i] = ynew[i]
                K[0, i] = K[6, i]
            n_steps += 1
            if tangent and clipped and t_stop == next_ren:
                nrm = 0.0
                for i in range(n_state, dim):
                    nrm += y[i] * y[i]
                nrm = math.sqrt(nrm)
                log_growth[ren_i] = math.log(nrm)
                ren_i += 1
                for i in range(n_state, dim):
                    y[i] /= nrm
                    K[0, i] /= nrm
                next_ren = (ren_i + 1) * renorm_dt
            if en == 0.0:
                fac = _MAX_FACTOR
            else:
                fac = _SAFETY * en ** (-_ALPHA) * err_old ** _BETA
                fac = min(_MAX_FACTOR, max(_MIN_FACTOR, fac))
            err_old = max(en, 1e-4)
            if clipped:
                h = max(h * fac, h_prop)
            else:
                h *= fac
        else:
            n_rej += 1
            h *= max(_MIN_FACTOR, _SAFETY * en ** (-0.2))

    if rec_i < times.size and status == STATUS_OK:
        for i in range(n_state):
            states[rec_i, i] = y[i]
        rec_i += 1
    return (times[:rec_i], states[:rec_i], y, log_growth[:ren_i], status, t,
            n_steps, n_rej, n_lift, nfev)
