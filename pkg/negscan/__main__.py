from negscan.cli import main

main()
