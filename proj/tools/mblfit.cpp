// placeholder main; subcommands are added once the core compiles
int main() { return 0; }
