//! Writing a patch to the text format and reading it back.

use approxlat::exactnum::int;
use approxlat::pointsets::{write_patch, ModelSet, PointSet, PointSetFile, Window};

fn main() -> approxlat::Result<()> {
    let set = PointSet::Model(ModelSet::symmetric(2, int(1))?);
    let patch = set.patch(&"[-5,5]x[-1,1]".parse::<Window>()?)?;
    let text = write_patch(&patch);
    print!("{text}");

    let path = std::env::temp_dir().join("approxlat-example.pts");
    std::fs::write(&path, &text)?;
    match PointSetFile::read(&path)? {
        PointSetFile::Patch(p) => println!("read back {} points, identical: {}", p.len(), p == patch),
        PointSetFile::Model(m) => println!("read a model set {m:?}"),
    }
    Ok(())
}
