//! Signed involutions and the Bruhat cells they index.
//!
//! A signed involution `w̃` sends `e_i` to `ε_i e_{w(i)}` and squares to the
//! identity. Indices are 0-based throughout the API; the cycle notation used
//! for text I/O is 1-based.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Mul, Neg};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A sign `±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i32(v: i32) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    /// Sign of a nonzero integer.
    pub fn of(v: i64) -> Sign {
        if v < 0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn to_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn is_minus(self) -> bool {
        self == Sign::Minus
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// A signed permutation matrix: `e_i ↦ signs[i] · e_{images[i]}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    images: Vec<usize>,
    signs: Vec<Sign>,
}

impl SignedPermutation {
    pub fn identity(n: usize) -> Self {
        SignedPermutation {
            images: (0..n).collect(),
            signs: vec![Sign::Plus; n],
        }
    }

    /// Builds from images and signs; panics on length mismatch or a non-bijection.
    pub fn new(images: Vec<usize>, signs: Vec<Sign>) -> Self {
        assert_eq!(images.len(), signs.len());
        let mut seen = vec![false; images.len()];
        for &x in &images {
            assert!(x < images.len() && !seen[x], "not a permutation");
            seen[x] = true;
        }
        SignedPermutation { images, signs }
    }

    /// Builds from a list of nonzero matrix entries `(row, col, sign)`, one per column.
    pub fn from_entries(n: usize, entries: impl IntoIterator<Item = (usize, usize, Sign)>) -> Option<Self> {
        let mut images = vec![usize::MAX; n];
        let mut signs = vec![Sign::Plus; n];
        for (r, c, s) in entries {
            if c >= n || r >= n || images[c] != usize::MAX {
                return None;
            }
            images[c] = r;
            signs[c] = s;
        }
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return None;
            }
            seen[x] = true;
        }
        Some(SignedPermutation { images, signs })
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn sign(&self, i: usize) -> Sign {
        self.signs[i]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    /// Matrix entry at `(row, col)` as an integer in `{-1, 0, 1}`.
    pub fn entry(&self, row: usize, col: usize) -> i32 {
        if self.images[col] == row {
            self.signs[col].to_i32()
        } else {
            0
        }
    }

    /// Matrix trace.
    pub fn trace(&self) -> i64 {
        (0..self.n())
            .filter(|&i| self.images[i] == i)
            .map(|i| self.signs[i].to_i32() as i64)
            .sum()
    }

    /// True when the matrix is symmetric, i.e. the permutation is an involution with
    /// `ε_i = ε_{w(i)}`.
    pub fn is_involution(&self) -> bool {
        (0..self.n()).all(|i| {
            let j = self.images[i];
            self.images[j] == i && self.signs[j] == self.signs[i]
        })
    }
}

impl Mul for &SignedPermutation {
    type Output = SignedPermutation;

    /// Matrix product: `(a * b)(e_i) = a(b(e_i))`.
    fn mul(self, rhs: &SignedPermutation) -> SignedPermutation {
        assert_eq!(self.n(), rhs.n());
        let images = rhs.images.iter().map(|&x| self.images[x]).collect();
        let signs = rhs
            .images
            .iter()
            .zip(&rhs.signs)
            .map(|(&x, &s)| self.signs[x] * s)
            .collect();
        SignedPermutation { images, signs }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvolutionError {
    #[error("ambient dimension must be positive")]
    Empty,
    #[error("perm has length {perm} but signs has length {signs}")]
    LengthMismatch { perm: usize, signs: usize },
    #[error("entry {value} at position {index} is not a value in 1..={n}, or is repeated")]
    NotPermutation { index: usize, value: usize, n: usize },
    #[error("w(w({0})) != {0}")]
    NotInvolution(usize),
    #[error("sign of {0} differs from the sign of its image")]
    SignMismatch(usize),
    #[error("sign entry {value} at position {index} is not ±1")]
    BadSign { index: usize, value: i32 },
}

/// A signed involution `w̃`; indexes one Bruhat cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedInvolution(SignedPermutation);

impl SignedInvolution {
    /// Validated constructor from a 1-based permutation and integer signs.
    pub fn new(perm: &[usize], signs: &[i32]) -> Result<Self, InvolutionError> {
        if perm.is_empty() {
            return Err(InvolutionError::Empty);
        }
        if perm.len() != signs.len() {
            return Err(InvolutionError::LengthMismatch {
                perm: perm.len(),
                signs: signs.len(),
            });
        }
        let n = perm.len();
        let mut seen = vec![false; n];
        for (index, &value) in perm.iter().enumerate() {
            if value == 0 || value > n || seen[value - 1] {
                return Err(InvolutionError::NotPermutation { index, value, n });
            }
            seen[value - 1] = true;
        }
        let images: Vec<usize> = perm.iter().map(|&x| x - 1).collect();
        let signs = signs
            .iter()
            .enumerate()
            .map(|(index, &value)| Sign::from_i32(value).ok_or(InvolutionError::BadSign { index, value }))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_permutation(SignedPermutation { images, signs })
    }

    /// Validated constructor from a signed permutation.
    pub fn from_permutation(p: SignedPermutation) -> Result<Self, InvolutionError> {
        for i in 0..p.n() {
            let j = p.images[i];
            if p.images[j] != i {
                return Err(InvolutionError::NotInvolution(i));
            }
            if p.signs[j] != p.signs[i] {
                return Err(InvolutionError::SignMismatch(i));
            }
        }
        Ok(SignedInvolution(p))
    }

    /// The diagonal matrix with the given signs.
    pub fn diagonal(signs: &[Sign]) -> Self {
        SignedInvolution(SignedPermutation {
            images: (0..signs.len()).collect(),
            signs: signs.to_vec(),
        })
    }

    pub fn as_permutation(&self) -> &SignedPermutation {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    /// `w(i)`.
    pub fn image(&self, i: usize) -> usize {
        self.0.images[i]
    }

    /// `ε_i`.
    pub fn sign(&self, i: usize) -> Sign {
        self.0.signs[i]
    }

    /// `ε_i` as an integer.
    pub fn eps(&self, i: usize) -> i32 {
        self.0.signs[i].to_i32()
    }

    pub fn perm(&self) -> &[usize] {
        &self.0.images
    }

    pub fn signs(&self) -> &[Sign] {
        &self.0.signs
    }

    /// `(n, k)` such that the cell lies in `G_k(ℝⁿ)`.
    pub fn grassmann_index(&self) -> (usize, usize) {
        let k = (0..self.n())
            .filter(|&i| {
                let j = self.image(i);
                j > i || (j == i && self.sign(i).is_minus())
            })
            .count();
        (self.n(), k)
    }

    pub fn k(&self) -> usize {
        self.grassmann_index().1
    }

    /// Pairs `i < j` with `w(i) > w(j)`.
    pub fn inversions(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n();
        (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| (i, j)))
            .filter(move |&(i, j)| self.image(i) > self.image(j))
    }

    /// Pairs `i < j` with `w(i) < w(j)`.
    pub fn rises(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n();
        (0..n).flat_map(move |i| ((i + 1)..n).map(move |j| (i, j)))
            .filter(move |&(i, j)| self.image(i) < self.image(j))
    }

    pub fn qinversions(&self) -> QInversionBasis {
        QInversionBasis::new(self)
    }

    /// Number of inversion classes; the dimension of the cell.
    pub fn cell_dim(&self) -> usize {
        self.inversions()
            .filter(|&(i, j)| (i, j) <= (self.image(j), self.image(i)))
            .count()
    }

    /// Rise classes under `(i,j) ~ (w(i),w(j))`, each given by its smallest member.
    pub fn qrises(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .rises()
            .filter(|&(i, j)| (i, j) <= (self.image(i), self.image(j)))
            .collect();
        out.sort_unstable();
        out
    }

    /// `w̃ ↦ −w̃`, i.e. `V ↦ V^⊥`.
    pub fn complement(&self) -> Self {
        SignedInvolution(SignedPermutation {
            images: self.0.images.clone(),
            signs: self.0.signs.iter().map(|&s| -s).collect(),
        })
    }

    /// Index set of the canonical basis `{e_i − w̃(e_i)}` of the (−1)-eigenspace.
    pub fn eminus_indices(&self) -> Vec<usize> {
        (0..self.n())
            .filter(|&i| {
                let j = self.image(i);
                i < j || (i == j && self.sign(i).is_minus())
            })
            .collect()
    }

    /// True when `w(D) = D`.
    pub fn stabilizes(&self, d: &[usize]) -> bool {
        d.iter().all(|&x| x < self.n() && d.contains(&self.image(x)))
    }

    /// Restriction to a `w`-stable index set, relabelled order-preservingly.
    pub fn restrict(&self, d: &[usize]) -> Option<Self> {
        if !self.stabilizes(d) {
            return None;
        }
        let mut d = d.to_vec();
        d.sort_unstable();
        let pos = |x: usize| d.binary_search(&x).unwrap();
        let images = d.iter().map(|&x| pos(self.image(x))).collect();
        let signs = d.iter().map(|&x| self.sign(x)).collect();
        Some(SignedInvolution(SignedPermutation { images, signs }))
    }

    /// Parses cycle notation, e.g. `(~1)(24)`, in ambient dimension `n`.
    pub fn parse(s: &str, n: usize) -> Result<Self, ParseError> {
        let cell = CellId::parse(s, n)?;
        if cell.orientation.is_some() {
            return Err(ParseError::new(s.len(), "unexpected orientation suffix"));
        }
        Ok(cell.involution)
    }
}

impl fmt::Display for SignedInvolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for i in 0..self.n() {
            let j = self.image(i);
            let members: Vec<usize> = match j.cmp(&i) {
                Ordering::Greater => vec![i, j],
                Ordering::Equal if self.sign(i).is_minus() => vec![i],
                _ => continue,
            };
            // Entries from 10 on need commas; a lone wide fixed point keeps a
            // trailing one so that `(~12,)` is not read as the 2-cycle `(~12)`.
            let wide = members.iter().any(|&x| x + 1 >= 10);
            let sep = if wide { "," } else { "" };
            let mut body = members.iter().map(|&x| (x + 1).to_string()).collect::<Vec<_>>().join(sep);
            if wide && members.len() == 1 {
                body.push(',');
            }
            let tilde = if self.sign(i).is_minus() { "~" } else { "" };
            write!(f, "({}{})", tilde, body)?;
            wrote = true;
        }
        if !wrote {
            write!(f, "()")?;
        }
        Ok(())
    }
}

/// One class of inversions under `(i,j) ~ (w(j),w(i))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct InversionClass {
    /// Lexicographically smallest member; the tangent direction `C` is built from it.
    pub rep: (usize, usize),
    /// Lexicographically largest member (equal to `rep` for singleton classes).
    pub top: (usize, usize),
}

/// Ordered basis of the tangent space at the cell centre.
///
/// Classes are ordered lexicographically by their largest member. Each class
/// contributes `C = S_{a,b} + ε_a ε_b S_{w(a),w(b)}` for its smallest member `(a,b)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QInversionBasis {
    classes: Vec<InversionClass>,
}

impl QInversionBasis {
    pub fn new(w: &SignedInvolution) -> Self {
        let mut classes: Vec<InversionClass> = w
            .inversions()
            .filter_map(|(i, j)| {
                let partner = (w.image(j), w.image(i));
                ((i, j) <= partner).then_some(InversionClass { rep: (i, j), top: partner })
            })
            .collect();
        classes.sort_by_key(|c| c.top);
        QInversionBasis { classes }
    }

    pub fn classes(&self) -> &[InversionClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Class position of an (unordered) inversion pair together with the sign
    /// relating `C_{pair}` to the class basis vector; `None` for non-inversions.
    pub fn locate(&self, w: &SignedInvolution, a: usize, b: usize) -> Option<(usize, i32)> {
        let (a, b) = (a.min(b), a.max(b));
        if a == b || w.image(a) < w.image(b) {
            return None;
        }
        let idx = self
            .classes
            .iter()
            .position(|c| c.rep == (a, b) || c.top == (a, b))?;
        let sign = if self.classes[idx].rep == (a, b) {
            1
        } else {
            w.eps(a) * w.eps(b)
        };
        Some((idx, sign))
    }
}

/// A cell of one of the complexes: an involution plus an orientation in the
/// oriented variant.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CellId {
    pub involution: SignedInvolution,
    pub orientation: Option<Sign>,
}

impl CellId {
    pub fn plain(involution: SignedInvolution) -> Self {
        CellId { involution, orientation: None }
    }

    pub fn oriented(involution: SignedInvolution, orientation: Sign) -> Self {
        CellId { involution, orientation: Some(orientation) }
    }

    pub fn dim(&self) -> usize {
        self.involution.cell_dim()
    }

    /// Parses `(~1)(24)^+`-style notation in ambient dimension `n`.
    pub fn parse(s: &str, n: usize) -> Result<Self, ParseError> {
        Parser { src: s, pos: 0, n }.cell()
    }
}

impl fmt::Display for CellId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.involution)?;
        if let Some(o) = self.orientation {
            write!(f, "^{}", o)?;
        }
        Ok(())
    }
}

impl PartialOrd for CellId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Cells order by dimension, then by their formatted text.
impl Ord for CellId {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.dim(), self.to_string()).cmp(&(other.dim(), other.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("parse error at byte {pos}: {msg}")]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl ParseError {
    fn new(pos: usize, msg: impl Into<String>) -> Self {
        ParseError { pos, msg: msg.into() }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    n: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseError::new(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn cell(mut self) -> Result<CellId, ParseError> {
        let n = self.n;
        if n == 0 {
            return Err(ParseError::new(0, "ambient dimension must be positive"));
        }
        let mut images: Vec<usize> = (0..n).collect();
        let mut signs = vec![Sign::Plus; n];
        let mut used = vec![false; n];
        let mut any = false;
        while self.peek() == Some(b'(') {
            let start = self.pos;
            self.pos += 1;
            if self.peek() == Some(b')') {
                self.pos += 1;
                if any {
                    return Err(ParseError::new(start, "empty cycle"));
                }
                any = true;
                continue;
            }
            let (members, negative) = self.cycle_body()?;
            self.expect(b')')?;
            for &m in &members {
                if m == 0 || m > n {
                    return Err(ParseError::new(start, format!("entry {} outside 1..={}", m, n)));
                }
                if used[m - 1] {
                    return Err(ParseError::new(start, format!("entry {} repeated", m)));
                }
                used[m - 1] = true;
            }
            let sign = if negative { Sign::Minus } else { Sign::Plus };
            match members.as_slice() {
                [a] => {
                    if !negative {
                        return Err(ParseError::new(start, "positive fixed points are implicit"));
                    }
                    signs[a - 1] = sign;
                }
                [a, b] => {
                    images[a - 1] = b - 1;
                    images[b - 1] = a - 1;
                    signs[a - 1] = sign;
                    signs[b - 1] = sign;
                }
                _ => return Err(ParseError::new(start, "cycles have one or two entries")),
            }
            any = true;
        }
        if !any {
            return Err(ParseError::new(self.pos, "expected '('"));
        }
        let orientation = if self.peek() == Some(b'^') {
            self.pos += 1;
            let o = match self.peek() {
                Some(b'+') => Sign::Plus,
                Some(b'-') => Sign::Minus,
                _ => return Err(ParseError::new(self.pos, "expected '+' or '-'")),
            };
            self.pos += 1;
            Some(o)
        } else {
            None
        };
        if self.pos != self.src.len() {
            return Err(ParseError::new(self.pos, "trailing input"));
        }
        let involution = SignedInvolution::from_permutation(SignedPermutation { images, signs })
            .map_err(|e| ParseError::new(0, e.to_string()))?;
        Ok(CellId { involution, orientation })
    }

    fn cycle_body(&mut self) -> Result<(Vec<usize>, bool), ParseError> {
        let end = self.src[self.pos..]
            .find(')')
            .map(|e| self.pos + e)
            .ok_or_else(|| ParseError::new(self.pos, "unclosed cycle"))?;
        let body = &self.src[self.pos..end];
        let mut negative = false;
        let mut members = Vec::new();
        let tokens: Vec<&str> = if body.contains(',') {
            body.split(',').filter(|t| !t.is_empty()).collect()
        } else {
            let mut toks = Vec::new();
            let mut i = 0;
            let bytes = body.as_bytes();
            while i < bytes.len() {
                let len = if bytes[i] == b'~' { 2 } else { 1 };
                toks.push(&body[i..(i + len).min(body.len())]);
                i += len;
            }
            toks
        };
        for tok in tokens {
            let digits = match tok.strip_prefix('~') {
                Some(rest) => {
                    negative = true;
                    rest
                }
                None => tok,
            };
            let value: usize = digits
                .parse()
                .map_err(|_| ParseError::new(self.pos, format!("bad cycle entry '{}'", tok)))?;
            members.push(value);
        }
        self.pos = end;
        Ok((members, negative))
    }
}

/// All involutions of `{0..n-1}`, as image vectors.
fn involution_perms(n: usize) -> Vec<Vec<usize>> {
    fn rec(rest: &[usize], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let Some((&a, tail)) = rest.split_first() else {
            out.push(cur.clone());
            return;
        };
        rec(tail, cur, out);
        for (idx, &b) in tail.iter().enumerate() {
            cur[a] = b;
            cur[b] = a;
            let remaining: Vec<usize> = tail.iter().enumerate().filter(|&(k, _)| k != idx).map(|(_, &x)| x).collect();
            rec(&remaining, cur, out);
            cur[a] = a;
            cur[b] = b;
        }
    }
    let mut out = Vec::new();
    let all: Vec<usize> = (0..n).collect();
    let mut cur = all.clone();
    rec(&all, &mut cur, &mut out);
    out
}

/// All cells of `G_k(ℝⁿ)`, sorted by dimension and then by cycle notation.
pub fn enumerate_cells(n: usize, k: usize) -> Vec<SignedInvolution> {
    let mut out = Vec::new();
    if n == 0 || k > n {
        return out;
    }
    for perm in involution_perms(n) {
        let orbits: Vec<usize> = (0..n).filter(|&i| perm[i] >= i).collect();
        for mask in 0u32..(1 << orbits.len()) {
            let mut signs = vec![Sign::Plus; n];
            for (bit, &o) in orbits.iter().enumerate() {
                if mask & (1 << bit) != 0 {
                    signs[o] = Sign::Minus;
                    signs[perm[o]] = Sign::Minus;
                }
            }
            let w = SignedInvolution(SignedPermutation { images: perm.clone(), signs });
            if w.k() == k {
                out.push(w);
            }
        }
    }
    out.sort_by_cached_key(|w| (w.cell_dim(), w.to_string()));
    out
}

/// Number of cells per dimension.
pub fn census(n: usize, k: usize) -> Vec<usize> {
    let cells = enumerate_cells(n, k);
    let top = cells.iter().map(|c| c.cell_dim()).max().unwrap_or(0);
    let mut out = vec![0; if cells.is_empty() { 0 } else { top + 1 }];
    for c in &cells {
        out[c.cell_dim()] += 1;
    }
    out
}
