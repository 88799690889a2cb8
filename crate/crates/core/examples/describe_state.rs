use qepi::runner::describe_state;

fn main() -> qepi::Result<()> {
    let spec = std::env::args().nth(1).unwrap_or_else(|| "fock(1)*coherent(0.5,-0.3)".into());
    println!("{}", serde_json::to_string_pretty(&describe_state(&spec, None)?)?);
    Ok(())
}
