//! Small fixed-size vector helpers and the minimal enclosing ball.

pub type Vec3 = [f64; 3];

#[inline]
pub fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

#[inline]
pub fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
pub fn scale(a: Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

#[inline]
pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

#[inline]
pub fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn dist(a: Vec3, b: Vec3) -> f64 {
    norm(sub(a, b))
}

pub fn centroid(points: &[Vec3]) -> Vec3 {
    let n = points.len().max(1) as f64;
    let s = points.iter().fold([0.0; 3], |acc, p| add(acc, *p));
    scale(s, 1.0 / n)
}

/// Area-weighted normal (Newell's method); its length is twice the polygon area.
pub fn newell_normal(poly: &[Vec3]) -> Vec3 {
    let mut n = [0.0; 3];
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        n[0] += (a[1] - b[1]) * (a[2] + b[2]);
        n[1] += (a[2] - b[2]) * (a[0] + b[0]);
        n[2] += (a[0] - b[0]) * (a[1] + b[1]);
    }
    n
}

/// Area centroid of a planar polygon, by fan triangulation around the vertex mean.
pub fn polygon_centroid(poly: &[Vec3], unit_normal: Vec3) -> (Vec3, f64) {
    let c0 = centroid(poly);
    let mut area = 0.0;
    let mut acc = [0.0; 3];
    for i in 0..poly.len() {
        let a = poly[i];
        let b = poly[(i + 1) % poly.len()];
        let t = 0.5 * dot(cross(sub(a, c0), sub(b, c0)), unit_normal);
        let tc = scale(add(add(a, b), c0), 1.0 / 3.0);
        acc = add(acc, scale(tc, t));
        area += t;
    }
    if area.abs() > 0.0 {
        (scale(acc, 1.0 / area), area)
    } else {
        (c0, 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball {
    pub center: Vec3,
    pub radius: f64,
}

impl Ball {
    fn contains(&self, p: Vec3, slack: f64) -> bool {
        dist(self.center, p) <= self.radius + slack
    }
}

/// Smallest ball enclosing `points` (Welzl's recursion; meant for the handful
/// of vertices of a single cell).
pub fn min_enclosing_ball(points: &[Vec3]) -> Ball {
    assert!(!points.is_empty(), "enclosing ball of an empty set");
    let extent = points
        .iter()
        .map(|p| dist(*p, points[0]))
        .fold(0.0_f64, f64::max);
    let slack = 1e-12 * extent.max(f64::MIN_POSITIVE);
    let mut support = Vec::with_capacity(4);
    welzl(points, &mut support, slack)
}

fn welzl(points: &[Vec3], support: &mut Vec<Vec3>, slack: f64) -> Ball {
    if points.is_empty() || support.len() == 4 {
        return trivial_ball(support, slack);
    }
    let (last, rest) = points.split_last().unwrap();
    let ball = welzl(rest, support, slack);
    if ball.radius >= 0.0 && ball.contains(*last, slack) {
        return ball;
    }
    support.push(*last);
    let ball = welzl(rest, support, slack);
    support.pop();
    ball
}

fn trivial_ball(support: &[Vec3], slack: f64) -> Ball {
    match support.len() {
        0 => Ball {
            center: [0.0; 3],
            radius: -1.0,
        },
        1 => Ball {
            center: support[0],
            radius: 0.0,
        },
        2 => diametral(support[0], support[1]),
        3 => circumball3(support[0], support[1], support[2]),
        _ => circumball4(support, slack),
    }
}

fn diametral(a: Vec3, b: Vec3) -> Ball {
    Ball {
        center: scale(add(a, b), 0.5),
        radius: 0.5 * dist(a, b),
    }
}

fn circumball3(a: Vec3, b: Vec3, c: Vec3) -> Ball {
    let ab = sub(b, a);
    let ac = sub(c, a);
    let n = cross(ab, ac);
    let n2 = dot(n, n);
    let scale_ref = dot(ab, ab).max(dot(ac, ac));
    if n2 <= 1e-24 * scale_ref * scale_ref {
        // collinear: the farthest pair spans the ball
        let cands = [diametral(a, b), diametral(a, c), diametral(b, c)];
        return cands
            .into_iter()
            .max_by(|x, y| x.radius.total_cmp(&y.radius))
            .unwrap();
    }
    let t1 = scale(cross(n, ab), dot(ac, ac));
    let t2 = scale(cross(ac, n), dot(ab, ab));
    let off = scale(add(t1, t2), 1.0 / (2.0 * n2));
    Ball {
        center: add(a, off),
        radius: norm(off),
    }
}

fn circumball4(p: &[Vec3], slack: f64) -> Ball {
    let (a, b, c, d) = (p[0], p[1], p[2], p[3]);
    let rows = [sub(b, a), sub(c, a), sub(d, a)];
    let rhs = [
        0.5 * dot(rows[0], rows[0]),
        0.5 * dot(rows[1], rows[1]),
        0.5 * dot(rows[2], rows[2]),
    ];
    let det = dot(rows[0], cross(rows[1], rows[2]));
    let scale_ref = rows.iter().map(|r| norm(*r)).fold(0.0_f64, f64::max);
    if det.abs() <= 1e-12 * scale_ref.powi(3) {
        // coplanar support: smallest three-point ball covering all four
        let mut best: Option<Ball> = None;
        for skip in 0..4 {
            let tri: Vec<Vec3> = (0..4).filter(|&i| i != skip).map(|i| p[i]).collect();
            let ball = circumball3(tri[0], tri[1], tri[2]);
            if ball.contains(p[skip], slack) && best.is_none_or(|b| ball.radius < b.radius) {
                best = Some(ball);
            }
        }
        return best.unwrap_or_else(|| circumball3(a, b, c));
    }
    // Cramer's rule on rows . x = rhs
    let inv = 1.0 / det;
    let x = scale(
        add(
            add(
                scale(cross(rows[1], rows[2]), rhs[0]),
                scale(cross(rows[2], rows[0]), rhs[1]),
            ),
            scale(cross(rows[0], rows[1]), rhs[2]),
        ),
        inv,
    );
    Ball {
        center: add(a, x),
        radius: norm(x),
    }
}
