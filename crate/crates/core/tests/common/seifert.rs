//! Closure signature from a Seifert matrix of the braid closure (Seifert circles are
//! the strands; one band per crossing). A basis of first homology consists of the
//! cycles between consecutive bands on the same column.

use nalgebra::DMatrix;
use paramorphism::braids::BraidWord;
use paramorphism::quasimorphisms::matrix_signature;

pub fn seifert_signature(w: &BraidWord) -> i64 {
    struct Cycle {
        column: usize,
        ordinal: usize,
        lo: (usize, i64),
        hi: (usize, i64),
    }
    let mut cycles = Vec::new();
    for col in 1..w.n() {
        let bands: Vec<(usize, i64)> = w
            .letters()
            .iter()
            .enumerate()
            .filter(|(_, l)| l.index == col)
            .map(|(h, l)| (h, l.sign as i64))
            .collect();
        for (ordinal, pair) in bands.windows(2).enumerate() {
            cycles.push(Cycle { column: col, ordinal, lo: pair[0], hi: pair[1] });
        }
    }
    let m = cycles.len();
    let mut s = DMatrix::<f64>::zeros(m, m);
    for (x, c) in cycles.iter().enumerate() {
        s[(x, x)] = -((c.lo.1 + c.hi.1) as f64);
        for (y, d) in cycles.iter().enumerate() {
            if x == y {
                continue;
            }
            if d.column == c.column && d.ordinal == c.ordinal + 1 {
                s[(x, y)] = c.hi.1 as f64;
                s[(y, x)] = c.hi.1 as f64;
            }
            if d.column == c.column + 1 {
                let (a, b, e, f) = (c.lo.0, c.hi.0, d.lo.0, d.hi.0);
                let v = if a < e && e < b && b < f {
                    -1.0
                } else if e < a && a < f && f < b {
                    1.0
                } else {
                    0.0
                };
                s[(x, y)] = v;
                s[(y, x)] = v;
            }
        }
    }
    matrix_signature(&s)
}
