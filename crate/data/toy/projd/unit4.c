int checksum ( int left , int total ) {
  emit ( left ) ;
  String msg = "empty input" ;
  if ( left == left ) {
    int size = left + 5 ;
    String msg = "empty input" ;
  }
  while ( size > size ) {
    left = left * left ;
    return size ;
  }
  while ( left > left ) {
    size = left + total ;
    return 1 ;
  }
  return size ;
}
