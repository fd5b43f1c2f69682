//! Binary kernel dumps.
//!
//! All integers and floats are little-endian.
//!
//! ```text
//! offset  size  field
//!      0     4  magic "GKRN"
//!      4     4  u32 format version (1)
//!      8     4  u32 family tag (1 schrodinger, 2 dirac, 3 kg-tilde, 4 kg-scalar, 5 born)
//!     12     4  u32 components per site k
//!     16     4  u32 nt
//!     20     4  u32 nx
//!     24     8  f64 dt
//!     32     8  f64 dx
//!     40     4  u32 block count B
//!     44     4  u32 reserved (0)
//!     48        B blocks
//! ```
//!
//! Each block is `u32 t'`, `u32 t`, then `(k·nx)²` complex entries in
//! row-major order, each written as `f64 re, f64 im`.

use std::io::{Read, Write};

use crate::{CMatrix, Error, Result, C64};

use super::kernel::{GreenKernel, KernelFamily};

pub const MAGIC: &[u8; 4] = b"GKRN";
pub const VERSION: u32 = 1;

/// A kernel dump read back from bytes.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelDump {
    pub family: KernelFamily,
    pub components: u32,
    pub nt: u32,
    pub nx: u32,
    pub dt: f64,
    pub dx: f64,
    /// `(t', t, block)`.
    pub blocks: Vec<(u32, u32, CMatrix)>,
}

impl KernelDump {
    /// Collects the blocks `g(t', t)` for each source slice `t` in `sources`
    /// and every `t' ≥ t`.
    pub fn from_kernel(kernel: &GreenKernel, sources: &[usize]) -> Result<Self> {
        let lat = kernel.lattice();
        let mut blocks = Vec::new();
        for &t in sources {
            for (i, b) in kernel.blocks_from(t)?.into_iter().enumerate() {
                blocks.push(((t + i) as u32, t as u32, b));
            }
        }
        Ok(KernelDump {
            family: kernel.family(),
            components: kernel.components() as u32,
            nt: lat.nt() as u32,
            nx: lat.nx() as u32,
            dt: lat.dt(),
            dx: lat.dx(),
            blocks,
        })
    }

    fn block_dim(&self) -> usize {
        (self.components * self.nx) as usize
    }

    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        let n = self.block_dim();
        w.write_all(MAGIC)?;
        for v in [VERSION, self.family.tag(), self.components, self.nt, self.nx] {
            w.write_all(&v.to_le_bytes())?;
        }
        w.write_all(&self.dt.to_le_bytes())?;
        w.write_all(&self.dx.to_le_bytes())?;
        w.write_all(&(self.blocks.len() as u32).to_le_bytes())?;
        w.write_all(&0u32.to_le_bytes())?;
        let mut buf = Vec::with_capacity(8 + n * n * 16);
        for (tp, t, b) in &self.blocks {
            if b.nrows() != n || b.ncols() != n {
                return Err(Error::DimensionMismatch { expected: n, found: b.nrows() });
            }
            buf.clear();
            buf.extend_from_slice(&tp.to_le_bytes());
            buf.extend_from_slice(&t.to_le_bytes());
            for r in 0..n {
                for c in 0..n {
                    buf.extend_from_slice(&b[(r, c)].re.to_le_bytes());
                    buf.extend_from_slice(&b[(r, c)].im.to_le_bytes());
                }
            }
            w.write_all(&buf)?;
        }
        Ok(())
    }

    pub fn read_from<R: Read>(r: &mut R) -> Result<Self> {
        let mut magic = [0u8; 4];
        read_exact(r, &mut magic)?;
        if &magic != MAGIC {
            return Err(Error::KernelFormat("bad magic".into()));
        }
        let version = read_u32(r)?;
        if version != VERSION {
            return Err(Error::KernelFormat(format!("unsupported version {version}")));
        }
        let tag = read_u32(r)?;
        let family = KernelFamily::from_tag(tag).ok_or_else(|| Error::KernelFormat(format!("unknown family tag {tag}")))?;
        let components = read_u32(r)?;
        let nt = read_u32(r)?;
        let nx = read_u32(r)?;
        let dt = read_f64(r)?;
        let dx = read_f64(r)?;
        let count = read_u32(r)?;
        let _reserved = read_u32(r)?;
        let n = (components as usize)
            .checked_mul(nx as usize)
            .ok_or_else(|| Error::KernelFormat("block size overflows".into()))?;
        let mut blocks = Vec::new();
        let mut buf = vec![0u8; n * n * 16];
        for _ in 0..count {
            let tp = read_u32(r)?;
            let t = read_u32(r)?;
            if tp >= nt || t >= nt {
                return Err(Error::KernelFormat(format!("block ({tp}, {t}) outside nt={nt}")));
            }
            read_exact(r, &mut buf)?;
            let b = CMatrix::from_fn(n, n, |row, col| {
                let o = (row * n + col) * 16;
                C64::new(
                    f64::from_le_bytes(buf[o..o + 8].try_into().expect("8 bytes")),
                    f64::from_le_bytes(buf[o + 8..o + 16].try_into().expect("8 bytes")),
                )
            });
            blocks.push((tp, t, b));
        }
        let mut rest = [0u8; 1];
        if r.read(&mut rest)? != 0 {
            return Err(Error::KernelFormat("trailing bytes after last block".into()));
        }
        Ok(KernelDump { family, components, nt, nx, dt, dx, blocks })
    }
}

fn read_exact<R: Read>(r: &mut R, buf: &mut [u8]) -> Result<()> {
    r.read_exact(buf).map_err(|e| match e.kind() {
        std::io::ErrorKind::UnexpectedEof => Error::KernelFormat("truncated dump".into()),
        _ => Error::Io(e),
    })
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    read_exact(r, &mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_f64<R: Read>(r: &mut R) -> Result<f64> {
    let mut b = [0u8; 8];
    read_exact(r, &mut b)?;
    Ok(f64::from_le_bytes(b))
}
