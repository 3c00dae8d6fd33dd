# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled orbit kernels.

Line-for-line twin of _pure.py: the same functions, the same expression
structure, the same libm calls, so both backends agree bit for bit.  Any
change must be mirrored there.
"""

from libc.math cimport acos, acosh, atan2, cos, floor, fmod, pow, sin, sqrt

cdef double _DET_TOL = 1e-12
cdef double _DESCENT_SLACK = 1e-12
cdef int _REDUCE_CAP = 10_000
cdef double _PI = 3.141592653589793
cdef double _HALF_PI = 0.5 * 3.141592653589793
cdef double _TAU = 2.0 * 3.141592653589793

TRANS_NONE = 0
TRANS_BOUNDARY = 1
TRANS_ROTATION = 2

cdef int _MAX_LETTERS = 16


cdef inline double _dist_to_center(double a, double b, double c, double d):
    cdef double gamma = c * c + d * d
    cdef double re = (a * c + b * d) / gamma
    cdef double im = 1.0 / gamma
    return acosh(1.0 + (re * re + (im - 1.0) * (im - 1.0)) / (2.0 * im))


cdef inline double _boundary_apply(double a, double b, double c, double d,
                                   double theta):
    cdef double half = 0.5 * theta
    cdef double p = sin(half)
    cdef double q = cos(half)
    cdef double pp = a * p + b * q
    cdef double qp = c * p + d * q
    cdef double phi = atan2(pp, qp)
    if phi <= -_HALF_PI:
        phi += _PI
    elif phi > _HALF_PI:
        phi -= _PI
    return 2.0 * phi


cdef struct Quat:
    double w
    double x
    double y
    double z


cdef inline Quat _quat_mul_norm(double l0, double l1, double l2, double l3,
                                double t0, double t1, double t2, double t3):
    cdef double w = l0 * t0 - l1 * t1 - l2 * t2 - l3 * t3
    cdef double x = l0 * t1 + l1 * t0 + l2 * t3 - l3 * t2
    cdef double y = l0 * t2 - l1 * t3 + l2 * t0 + l3 * t1
    cdef double z = l0 * t3 + l1 * t2 - l2 * t1 + l3 * t0
    cdef double n = sqrt(w * w + x * x + y * y + z * z)
    cdef Quat out
    w /= n
    x /= n
    y /= n
    z /= n
    cdef double flip = 1.0
    if w > 1e-12:
        flip = 1.0
    elif w < -1e-12:
        flip = -1.0
    elif x > 1e-12:
        flip = 1.0
    elif x < -1e-12:
        flip = -1.0
    elif y > 1e-12:
        flip = 1.0
    elif y < -1e-12:
        flip = -1.0
    elif z > 1e-12:
        flip = 1.0
    elif z < -1e-12:
        flip = -1.0
    out.w = flip * w
    out.x = flip * x
    out.y = flip * y
    out.z = flip * z
    return out


cdef inline tuple _tangent_coords(double a, double b, double c, double d):
    cdef double gamma = c * c + d * d
    cdef double re = (a * c + b * d) / gamma
    cdef double im = 1.0 / gamma
    # fmod plus the sign fix matches Python float modulo bit for bit
    cdef double direction = fmod(_HALF_PI - 2.0 * atan2(c, d), _TAU)
    if direction < 0.0:
        direction += _TAU
    return (re, im, direction)


cdef inline tuple _pole_coords(double t0, double t1, double t2, double t3):
    cdef double vx = 2.0 * (t0 * t2 + t1 * t3)
    cdef double vy = 2.0 * (t2 * t3 - t0 * t1)
    cdef double vz = 1.0 - 2.0 * t1 * t1 - 2.0 * t2 * t2
    if vz > 1.0:
        vz = 1.0
    elif vz < -1.0:
        vz = -1.0
    return (acos(vz), atan2(vy, vx))


cdef inline tuple _trans_coords(int trans_kind, double t0, double t1,
                                double t2, double t3):
    if trans_kind == 1:
        return (t0,)
    if trans_kind == 2:
        return _pole_coords(t0, t1, t2, t3)
    return ()


def surface_orbit(frame, step, letters, trans_kind, trans_quats, trans_state,
                  steps, sample_every):
    """See _pure.surface_orbit; this is its compiled twin."""
    cdef double a = frame[0]
    cdef double b = frame[1]
    cdef double c = frame[2]
    cdef double d = frame[3]
    cdef double sa = step[0]
    cdef double sb = step[1]
    cdef double sc = step[2]
    cdef double sd = step[3]
    cdef double t0 = trans_state[0]
    cdef double t1 = trans_state[1]
    cdef double t2 = trans_state[2]
    cdef double t3 = trans_state[3]
    cdef int kind = trans_kind
    cdef long n_steps = steps
    cdef long every = sample_every
    cdef int n_letters = len(letters) // 4
    if n_letters > _MAX_LETTERS:
        raise ValueError("too many reduction letters")
    cdef double[64] lets
    cdef double[64] quats
    cdef int j
    for j in range(4 * n_letters):
        lets[j] = letters[j]
    if kind == 2:
        for j in range(4 * n_letters):
            quats[j] = trans_quats[j]
    cdef list samples = []
    cdef long i
    cdef int k, descend
    cdef bint moved
    cdef double det, scale, dist, cand
    cdef double la, lb, lc, ld, ca, cb, cc, cd
    cdef Quat q
    for i in range(n_steps):
        a, b, c, d = (
            a * sa + b * sc,
            a * sb + b * sd,
            c * sa + d * sc,
            c * sb + d * sd,
        )
        det = a * d - b * c
        if det - 1.0 > _DET_TOL or 1.0 - det > _DET_TOL or (i + 1) % 64 == 0:
            if det <= 0.0:
                raise ValueError("frame determinant collapsed to %g" % det)
            scale = 1.0 / sqrt(det)
            a *= scale
            b *= scale
            c *= scale
            d *= scale
        dist = _dist_to_center(a, b, c, d)
        descend = 0
        while True:
            moved = False
            for k in range(n_letters):
                la = lets[4 * k]
                lb = lets[4 * k + 1]
                lc = lets[4 * k + 2]
                ld = lets[4 * k + 3]
                ca = la * a + lb * c
                cb = la * b + lb * d
                cc = lc * a + ld * c
                cd = lc * b + ld * d
                cand = _dist_to_center(ca, cb, cc, cd)
                if cand < dist - _DESCENT_SLACK:
                    a = ca
                    b = cb
                    c = cc
                    d = cd
                    dist = cand
                    if kind == 1:
                        t0 = _boundary_apply(la, lb, lc, ld, t0)
                    elif kind == 2:
                        q = _quat_mul_norm(
                            quats[4 * k],
                            quats[4 * k + 1],
                            quats[4 * k + 2],
                            quats[4 * k + 3],
                            t0, t1, t2, t3,
                        )
                        t0 = q.w
                        t1 = q.x
                        t2 = q.y
                        t3 = q.z
                    moved = True
                    break
            if not moved:
                break
            descend += 1
            if descend > _REDUCE_CAP:
                raise ValueError(
                    "reduction did not settle within %d descents at step %d"
                    % (_REDUCE_CAP, i)
                )
        if (i + 1) % every == 0:
            samples.append(
                _tangent_coords(a, b, c, d)
                + _trans_coords(kind, t0, t1, t2, t3)
            )
    return (samples, (a, b, c, d), (t0, t1, t2, t3))


def modular_orbit(frame, step, trans_kind, trans_quats, trans_state,
                  steps, sample_every):
    """See _pure.modular_orbit; this is its compiled twin."""
    cdef double a = frame[0]
    cdef double b = frame[1]
    cdef double c = frame[2]
    cdef double d = frame[3]
    cdef double sa = step[0]
    cdef double sb = step[1]
    cdef double sc = step[2]
    cdef double sd = step[3]
    cdef double t0 = trans_state[0]
    cdef double t1 = trans_state[1]
    cdef double t2 = trans_state[2]
    cdef double t3 = trans_state[3]
    cdef int kind = trans_kind
    cdef long n_steps = steps
    cdef long every = sample_every
    cdef double[8] quats
    cdef int j
    if kind == 2:
        for j in range(8):
            quats[j] = trans_quats[j]
    cdef list samples = []
    cdef long i, rep
    cdef int rounds
    cdef double det, scale, gamma, re, im, m
    cdef double q0, q1, q2, q3
    cdef Quat q
    for i in range(n_steps):
        a, b, c, d = (
            a * sa + b * sc,
            a * sb + b * sd,
            c * sa + d * sc,
            c * sb + d * sd,
        )
        det = a * d - b * c
        if det - 1.0 > _DET_TOL or 1.0 - det > _DET_TOL or (i + 1) % 64 == 0:
            if det <= 0.0:
                raise ValueError("frame determinant collapsed to %g" % det)
            scale = 1.0 / sqrt(det)
            a *= scale
            b *= scale
            c *= scale
            d *= scale
        rounds = 0
        while True:
            gamma = c * c + d * d
            re = (a * c + b * d) / gamma
            im = 1.0 / gamma
            m = floor(re + 0.5)
            if m != 0.0:
                a -= m * c
                b -= m * d
                re -= m
                if kind == 1:
                    t0 = _boundary_apply(1.0, -m, 0.0, 1.0, t0)
                elif kind == 2:
                    q0 = quats[0]
                    q1 = quats[1]
                    q2 = quats[2]
                    q3 = quats[3]
                    if m > 0:
                        q1, q2, q3 = -q1, -q2, -q3
                    rep = <long> m
                    if rep < 0:
                        rep = -rep
                    while rep > 0:
                        q = _quat_mul_norm(q0, q1, q2, q3, t0, t1, t2, t3)
                        t0 = q.w
                        t1 = q.x
                        t2 = q.y
                        t3 = q.z
                        rep -= 1
            if re * re + im * im < 1.0 - _DET_TOL:
                a, b, c, d = (-c, -d, a, b)
                if kind == 1:
                    t0 = _boundary_apply(0.0, -1.0, 1.0, 0.0, t0)
                elif kind == 2:
                    q = _quat_mul_norm(
                        quats[4], quats[5], quats[6], quats[7],
                        t0, t1, t2, t3,
                    )
                    t0 = q.w
                    t1 = q.x
                    t2 = q.y
                    t3 = q.z
            else:
                break
            rounds += 1
            if rounds > _REDUCE_CAP:
                raise ValueError(
                    "reduction did not settle within %d rounds at step %d"
                    % (_REDUCE_CAP, i)
                )
        if (i + 1) % every == 0:
            samples.append(
                _tangent_coords(a, b, c, d)
                + _trans_coords(kind, t0, t1, t2, t3)
            )
    return (samples, (a, b, c, d), (t0, t1, t2, t3))


def t3a_orbit(state, lam, eigen, sol_step, steps, sample_every):
    """See _pure.t3a_orbit; this is its compiled twin."""
    cdef double xp = state[0]
    cdef double yp = state[1]
    cdef double tp = state[2]
    cdef double clam = lam
    cdef double ap = eigen[0]
    cdef double bp = eigen[1]
    cdef double cp = eigen[2]
    cdef double dp = eigen[3]
    cdef double sx = sol_step[0]
    cdef double sy = sol_step[1]
    cdef double st = sol_step[2]
    cdef long n_steps = steps
    cdef long every = sample_every
    cdef list samples = []
    cdef long i
    cdef double scale, down, x, y, n, m1, m2
    for i in range(n_steps):
        scale = pow(clam, tp)
        xp += scale * sx
        yp += sy / scale
        tp += st
        n = floor(tp)
        if n != 0.0:
            if n > 64 or n < -64:
                raise ValueError(
                    "suspension coordinate drifted %d levels at step %d"
                    % (<long> n, i)
                )
            down = pow(clam, n)
            xp /= down
            yp *= down
            tp -= n
        x = -dp * xp + cp * yp
        y = bp * xp - ap * yp
        m1 = floor(x)
        m2 = floor(y)
        if m1 != 0.0 or m2 != 0.0:
            xp -= m1 * ap + m2 * cp
            yp -= m1 * bp + m2 * dp
        if (i + 1) % every == 0:
            samples.append((x - m1, y - m2, tp))
    return (samples, (xp, yp, tp))
