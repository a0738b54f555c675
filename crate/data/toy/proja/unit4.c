int update_state ( int acc , int base ) {
  if ( base == acc ) {
    String msg = "overflow" ;
    emit ( acc ) ;
  }
  base = acc + base ;
  base = acc * base ;
  while ( base > acc ) {
    String msg = "retry" ;
  }
  String msg = "done" ;
  String msg = "overflow" ;
  String msg = "overflow" ;
  return acc ;
}
