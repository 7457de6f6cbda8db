//! Write the CSV data behind the three plots into a directory
//! (default `./figures`).

use std::path::PathBuf;

use cprank::enumeration::ShapeTable;
use cprank::figures::figure_csv_from_table;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "figures".into()));
    std::fs::create_dir_all(&dir)?;
    let table = ShapeTable::build(20)?;
    for which in 1..=3u8 {
        let csv = figure_csv_from_table(which, &table)?;
        let path = dir.join(format!("figure{which}.csv"));
        std::fs::write(&path, &csv)?;
        println!("{} ({} rows)", path.display(), csv.lines().count() - 1);
    }
    Ok(())
}
